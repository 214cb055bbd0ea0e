"""Translation action on universal conditions, normal forms, and the census of
normal-form conditions of a given type and degree."""

from __future__ import annotations

import csv
import io
from array import array
from dataclasses import dataclass, field, replace
from typing import Sequence

from . import _kernels
from .classical import FibreReport, Verdict, everywhere_fibre_classical, is_universally_classical
from .domain import DomainConfig, Triple, canonical_rep, canonical_reps, decomposition_triples
from .errors import OutOfScope, ResourceLimit, SeparatingEdgeModeUnsupported
from .graph import enumerate_stable_graphs
from .stability import UniversalStability, validate_universal

INF = _kernels.INF

# (g, n) pairs the census runs on without an explicit override
DEFAULT_POLICY = frozenset({(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2)})
MAX_LEAVES = 200_000


@dataclass(frozen=True)
class PicRelElement:
    """Exponents ``t[j-2]`` of the generators swapping marking 1 against marking j, and ``s`` of the canonical-class one."""

    t: tuple
    s: int = 0

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))

    @classmethod
    def identity(cls, n: int) -> "PicRelElement":
        return cls((0,) * max(n - 1, 0), 0)

    def __add__(self, other: "PicRelElement") -> "PicRelElement":
        if len(self.t) != len(other.t):
            raise ValueError("elements of different types")
        return PicRelElement(tuple(a + b for a, b in zip(self.t, other.t)), self.s + other.s)

    def __neg__(self) -> "PicRelElement":
        return PicRelElement(tuple(-a for a in self.t), -self.s)

    def __sub__(self, other: "PicRelElement") -> "PicRelElement":
        return self + (-other)

    def is_identity(self) -> bool:
        return self.s == 0 and not any(self.t)

    def to_json(self) -> dict:
        return {"t": list(self.t), "s": self.s}

    @classmethod
    def from_json(cls, data: dict) -> "PicRelElement":
        return cls(tuple(data["t"]), int(data["s"]))


def shift(L: PicRelElement, t: Triple, g: int) -> int:
    """How much ``L`` moves the value at ``t``."""
    first = 1 in t.A
    out = 0
    for j, k in enumerate(L.t, start=2):
        if not k:
            continue
        inside = j in t.A
        if first and not inside:
            out += k
        elif inside and not first:
            out -= k
    if L.s:
        out += L.s * (2 * g - 2 * t.h - t.e if first else 2 - 2 * t.h - t.e)
    return out


def _check_type(cfg: DomainConfig, L: PicRelElement | None = None):
    if cfg.g < 2 or cfg.n < 1:
        raise OutOfScope("the translation action is handled for g >= 2 and n >= 1")
    if L is not None and len(L.t) != cfg.n - 1:
        raise ValueError(f"expected {cfg.n - 1} marking exponents, got {len(L.t)}")


def act(L: PicRelElement, m: UniversalStability) -> UniversalStability:
    cfg = m.cfg
    _check_type(cfg, L)
    return UniversalStability(cfg, {t: v + shift(L, t, cfg.g) for t, v in m.values.items()})


def singleton(i: int) -> Triple:
    return Triple(2, 0, frozenset({i}))


def normal_form(m: UniversalStability) -> tuple:
    """``(m', L)`` with ``m' = act(L, m)``, ``m'`` at the first singleton in ``0..2g-3`` and 0 at the others."""
    cfg = m.cfg
    _check_type(cfg)
    ts = tuple(m[singleton(j)] for j in range(2, cfg.n + 1))
    total = m[singleton(1)] + sum(ts)
    s = -(total // (2 * cfg.g - 2))
    L = PicRelElement(ts, s)
    return act(L, m), L


def is_normal_form(m: UniversalStability) -> bool:
    cfg = m.cfg
    return 0 <= m[singleton(1)] <= 2 * cfg.g - 3 and all(m[singleton(j)] == 0 for j in range(2, cfg.n + 1))


def are_translation_equivalent(m1: UniversalStability, m2: UniversalStability) -> PicRelElement | None:
    """An element carrying ``m1`` to ``m2``, or None."""
    if m1.cfg != m2.cfg:
        return None
    nf1, L1 = normal_form(m1)
    nf2, L2 = normal_form(m2)
    if nf1 != nf2:
        return None
    return L1 - L2


# census --------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    condition: UniversalStability
    universal: Verdict | None = None
    fibres: FibreReport | None = None

    @property
    def first_singleton(self) -> int:
        return self.condition[singleton(1)]

    @property
    def universally_classical(self) -> bool | None:
        return None if self.universal is None else self.universal.classical

    @property
    def everywhere_fibre_classical(self) -> bool | None:
        if self.fibres is None:
            # a universally classical condition is classical on every fibre
            return True if self.universally_classical else None
        return self.fibres.all_classical


@dataclass(frozen=True)
class CensusReport:
    cfg: DomainConfig
    entries: tuple = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.entries)

    def conditions(self) -> list:
        return [e.condition for e in self.entries]

    def to_json(self) -> dict:
        out = []
        for e in self.entries:
            item = {"condition": e.condition.to_json(), "first_singleton": e.first_singleton}
            if e.universal is not None:
                item["universally_classical"] = e.universal.classical
                if e.universal.witness is not None:
                    item["witness"] = e.universal.witness.to_json()["witness"]
                if e.universal.certificate is not None:
                    item["certificate"] = e.universal.certificate.to_json()["certificate"]
            if e.fibres is not None:
                item["everywhere_fibre_classical"] = e.fibres.all_classical
                item["offending_graphs"] = [gr.to_json() for gr in e.fibres.offending]
            out.append(item)
        return {"g": self.cfg.g, "n": self.cfg.n, "d": self.cfg.d, "entries": out}

    def to_csv(self) -> str:
        reps = canonical_reps(self.cfg)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["first_singleton"] + [f"m{t!r}" for t in reps] + ["universally_classical", "everywhere_fibre_classical"])
        for e in self.entries:
            flags = [_flag(e.universally_classical), _flag(e.everywhere_fibre_classical)]
            w.writerow([e.first_singleton] + [e.condition[t] for t in reps] + flags)
        return buf.getvalue()


def _flag(x) -> str:
    return "" if x is None else ("yes" if x else "no")


@dataclass
class CensusProblem:
    """Window constraints on canonical-representative values, in flat arrays."""

    cfg: DomainConfig
    variables: list
    index: dict
    rows: list  # (((var, coef), ...), const) meaning 0 <= sum + const <= 1

    def arrays(self):
        offsets, cvars, ccoefs, cconst, clo, chi = [0], [], [], [], [], []
        incidence = [[] for _ in self.variables]
        for k, (terms, const) in enumerate(self.rows):
            for v, a in terms:
                cvars.append(v)
                ccoefs.append(a)
                incidence[v].append(k)
            offsets.append(len(cvars))
            cconst.append(const)
            clo.append(0)
            chi.append(1)
        var_offsets, var_cons = [0], []
        for lst in incidence:
            var_cons.extend(lst)
            var_offsets.append(len(var_cons))
        q = lambda xs: array("q", xs)  # noqa: E731
        return tuple(q(x) for x in (offsets, cvars, ccoefs, cconst, clo, chi, var_offsets, var_cons))


def census_problem(cfg: DomainConfig) -> CensusProblem:
    """Each decomposition gives ``0 <= m_t - h - (m_t1 - h1 + m_t2 - h2) <= 1``.

    Values off the canonical representatives are rewritten through the
    complement-sum law, so the unknowns are the canonical values only.
    """
    reps = list(canonical_reps(cfg))
    index = {t: i for i, t in enumerate(reps)}
    seen = set()
    rows = []
    for t, t1, t2 in decomposition_triples(cfg):
        coefs: dict = {}
        const = -t.h + t1.h + t2.h
        for tri, sign in ((t, 1), (t1, -1), (t2, -1)):
            rep = canonical_rep(tri, cfg)
            if rep == tri:
                coefs[index[rep]] = coefs.get(index[rep], 0) + sign
            else:
                # m_tri = d + 1 - e - m_rep
                const += sign * (cfg.d + 1 - tri.e)
                coefs[index[rep]] = coefs.get(index[rep], 0) - sign
        terms = tuple(sorted((v, a) for v, a in coefs.items() if a))
        key = (terms, const)
        if key not in seen:
            seen.add(key)
            rows.append(key)
    return CensusProblem(cfg, reps, index, rows)


def _check_census_cfg(cfg: DomainConfig, force: bool):
    if cfg.min_valence != 2:
        raise SeparatingEdgeModeUnsupported("the census runs on the valence >= 2 domain only")
    _check_type(cfg)
    if not force and (cfg.g, cfg.n) not in DEFAULT_POLICY:
        raise ResourceLimit(f"type ({cfg.g}, {cfg.n}) is outside the default census policy")


def _constant_rows_ok(problem: CensusProblem) -> bool:
    return all(0 <= const <= 1 for terms, const in problem.rows if not terms)


def enumerate_census(cfg: DomainConfig, force: bool = False, max_leaves: int = MAX_LEAVES) -> CensusReport:
    """All normal-form universal conditions of type ``(cfg.g, cfg.n)`` and degree ``cfg.d``.

    Singleton values are pinned to each normal form; integer bounds are
    propagated through the window constraints to a fixpoint, and the
    remaining freedom is explored depth first, propagating after each choice.
    Every leaf is validated before it is reported.
    """
    _check_census_cfg(cfg, force)
    problem = census_problem(cfg)
    entries = []
    if not _constant_rows_ok(problem):
        return CensusReport(cfg, ())
    arrs = problem.arrays()
    nvar = len(problem.variables)
    leaves = 0
    for a in range(2 * cfg.g - 2):
        lo = array("q", [-INF] * nvar)
        hi = array("q", [INF] * nvar)
        for j in range(1, cfg.n + 1):
            v = problem.index[singleton(j)]
            lo[v] = hi[v] = a if j == 1 else 0
        if not _kernels.propagate(lo, hi, *arrs, True, None):
            continue
        stack = [(lo, hi)]
        while stack:
            lo, hi = stack.pop()
            free = [v for v in range(nvar) if lo[v] != hi[v]]
            if not free:
                leaves += 1
                if leaves > max_leaves:
                    raise ResourceLimit(f"more than {max_leaves} census leaves")
                values = {problem.variables[v]: lo[v] for v in range(nvar)}
                m = UniversalStability(cfg, values)
                if validate_universal(m):
                    raise AssertionError("internal error: census leaf fails validation")
                entries.append(m)
                continue
            unbounded = [v for v in free if lo[v] <= -INF or hi[v] >= INF]
            if unbounded:
                raise ResourceLimit(
                    f"bounds propagation leaves {problem.variables[unbounded[0]]} unbounded; "
                    "the census cannot finish by enumeration"
                )
            var = min(free, key=lambda v: (hi[v] - lo[v], v))
            # push in reverse so that smaller values are explored first
            for value in range(hi[var], lo[var] - 1, -1):
                lo2 = array("q", lo)
                hi2 = array("q", hi)
                lo2[var] = hi2[var] = value
                if _kernels.propagate(lo2, hi2, *arrs, False, [var]):
                    stack.append((lo2, hi2))
    entries.sort(key=_entry_key)
    return CensusReport(cfg, tuple(CensusEntry(m) for m in entries))


def _entry_key(m: UniversalStability) -> tuple:
    return tuple(m[t] for t in canonical_reps(m.cfg))


def classify_report(
    report: CensusReport, with_fibres: bool = False, shared_unlabeled: bool = False, graphs: Sequence | None = None
) -> CensusReport:
    """Fill in universal verdicts, and fibre verdicts for the entries that are not universally classical.

    Fibre checks run over ``graphs``, by default every trivalent graph of the type.
    """
    out = []
    for e in report.entries:
        verdict = is_universally_classical(e.condition)
        fibres = None
        if with_fibres and not verdict.classical:
            if graphs is None:
                graphs = enumerate_stable_graphs(report.cfg.g, report.cfg.n, trivalent_only=True)
            fibres = everywhere_fibre_classical(e.condition, graphs, shared_unlabeled)
        out.append(replace(e, universal=verdict, fibres=fibres))
    return CensusReport(report.cfg, tuple(out))
