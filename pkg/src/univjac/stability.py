"""Integer stability conditions: universal (on all triples), per-graph (on the
triples a graph realizes) and per-subset (on biconnected vertex subsets)."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .domain import (
    DomainConfig,
    Triple,
    alpha_masks,
    all_decompositions,
    canonical_reps,
    complement,
    decomposition_triples,
    domain_list,
    graph_domain,
    in_domain,
    is_compatible_decomposition,
)
from .errors import (
    Conflict,
    Incomplete,
    IncompatibleDecomposition,
    MissingTriple,
    NotInDomain,
    NotMorphismCompatible,
    TypeMismatch,
    UnstableVertex,
)
from .graph import Graph, is_stable, mask_to_set


class UniversalStability:
    """Integer values on the universal domain of ``cfg`` (degree ``cfg.d``).

    Complements missing from ``values`` are filled in from the complement-sum
    law, so a map given on canonical representatives only is complete.
    Complements that *are* given are kept verbatim, so inconsistent input
    stays visible to :func:`validate_universal`.
    """

    __slots__ = ("cfg", "values")

    def __init__(self, cfg: DomainConfig, values: Mapping[Triple, int]):
        full = {}
        for t, v in values.items():
            if not in_domain(t, cfg):
                raise NotInDomain(f"{t} is not in the domain of type ({cfg.g}, {cfg.n})")
            full[t] = int(v)
        for t in list(full):
            c = complement(t, cfg)
            if c not in full:
                full[c] = cfg.d + 1 - t.e - full[t]
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "values", MappingProxyType(dict(sorted(full.items(), key=lambda kv: kv[0].key))))

    def __setattr__(self, name, value):
        raise AttributeError("UniversalStability is immutable")

    @classmethod
    def from_canonical(cls, cfg: DomainConfig, values: Mapping[Triple, int]) -> "UniversalStability":
        return cls(cfg, values)

    @property
    def d(self) -> int:
        return self.cfg.d

    def __getitem__(self, t: Triple) -> int:
        try:
            return self.values[t]
        except KeyError:
            raise MissingTriple(f"no value at {t}") from None

    def __contains__(self, t: Triple) -> bool:
        return t in self.values

    def get(self, t: Triple, default=None):
        return self.values.get(t, default)

    def canonical_values(self) -> dict:
        return {t: self.values[t] for t in canonical_reps(self.cfg) if t in self.values}

    def is_complete(self) -> bool:
        return all(t in self.values for t in domain_list(self.cfg))

    def __eq__(self, other) -> bool:
        return isinstance(other, UniversalStability) and self.cfg == other.cfg and dict(self.values) == dict(other.values)

    def __hash__(self) -> int:
        return hash((self.cfg, tuple(self.values.items())))

    def __repr__(self) -> str:
        return f"UniversalStability(g={self.cfg.g}, n={self.cfg.n}, d={self.cfg.d}, {len(self.values)} values)"

    def to_json(self) -> dict:
        return {
            "g": self.cfg.g,
            "n": self.cfg.n,
            "d": self.cfg.d,
            "min_valence": self.cfg.min_valence,
            "values": [dict(t.to_json(), m=v) for t, v in self.canonical_values().items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "UniversalStability":
        cfg = DomainConfig(int(data["g"]), int(data["n"]), int(data["d"]), int(data.get("min_valence", 2)))
        values = {}
        for item in data["values"]:
            t = Triple.from_json(item)
            if t in values and values[t] != int(item["m"]):
                raise Conflict(t, values[t], int(item["m"]))
            values[t] = int(item["m"])
        return cls(cfg, values)


@dataclass(frozen=True)
class CStability:
    """Values on the triples realized by ``graph`` (or on an explicit triple set when ``graph`` is None)."""

    cfg: DomainConfig
    values: Mapping
    graph: Graph | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(dict(sorted(self.values.items(), key=lambda kv: kv[0].key))))

    def __getitem__(self, t: Triple) -> int:
        try:
            return self.values[t]
        except KeyError:
            raise MissingTriple(f"no value at {t}") from None

    def __contains__(self, t: Triple) -> bool:
        return t in self.values

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CStability)
            and self.cfg == other.cfg
            and dict(self.values) == dict(other.values)
            and self.graph == other.graph
        )

    def __hash__(self) -> int:
        return hash((self.cfg, tuple(self.values.items())))

    def with_values(self, values: Mapping) -> "CStability":
        return CStability(self.cfg, values, self.graph)


@dataclass(frozen=True)
class VStability:
    """Values on biconnected vertex subsets of ``graph``."""

    graph: Graph
    values: Mapping
    d: int = 0

    def __post_init__(self):
        items = sorted(((frozenset(k), int(v)) for k, v in self.values.items()), key=lambda kv: tuple(sorted(kv[0])))
        object.__setattr__(self, "values", MappingProxyType(dict(items)))

    def __eq__(self, other) -> bool:
        return isinstance(other, VStability) and self.graph == other.graph and dict(self.values) == dict(other.values) and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.graph, tuple(self.values.items())))


@dataclass(frozen=True)
class Violation:
    kind: str  # "complement" or "decomposition"
    triples: tuple
    residual: int

    def __str__(self) -> str:
        if self.kind == "complement":
            t, c = self.triples
            return f"complement sum at {t} + {c} is off by {self.residual}"
        t, t1, t2 = self.triples
        return f"decomposition {t} = {t1} + {t2} has residual {self.residual}"


def property2_residual(m, t: Triple, t1: Triple, t2: Triple) -> int:
    """``m_t - h - (m_t1 - h1 + m_t2 - h2)``; the window law asks for 0 or 1."""
    if not is_compatible_decomposition(t, t1, t2):
        raise IncompatibleDecomposition(f"{t1} + {t2} is not a decomposition of {t}")
    return m[t] - t.h - (m[t1] - t1.h + m[t2] - t2.h)


def _complement_violations(values: Mapping, cfg: DomainConfig, triples: Iterable[Triple]) -> list:
    out = []
    seen = set()
    for t in triples:
        if t in seen:
            continue
        c = complement(t, cfg)
        seen.add(t)
        seen.add(c)
        if t not in values or c not in values:
            continue
        off = values[t] + values[c] - (cfg.d + 1 - t.e)
        if off:
            a, b = (t, c) if t.key <= c.key else (c, t)
            out.append(Violation("complement", (a, b), off))
    return out


def validate_universal(m: UniversalStability) -> list:
    """Every complement-sum and decomposition-window violation (empty when valid)."""
    cfg = m.cfg
    missing = [t for t in canonical_reps(cfg) if t not in m.values]
    if missing:
        raise MissingTriple(f"no value at {missing[0]} ({len(missing)} missing)")
    out = _complement_violations(m.values, cfg, domain_list(cfg))
    for t, t1, t2 in decomposition_triples(cfg):
        r = m.values[t] - t.h - (m.values[t1] - t1.h + m.values[t2] - t2.h)
        if r not in (0, 1):
            out.append(Violation("decomposition", (t, t1, t2), r))
    return out


def _wide(cfg: DomainConfig) -> DomainConfig:
    return DomainConfig(cfg.g, cfg.n, cfg.d, 1)


def validate_c(c: CStability) -> list:
    """The same two laws, restricted to triples carried by ``c``."""
    out = _complement_violations(c.values, _wide(c.cfg), list(c.values))
    decomps = all_decompositions(DomainConfig(c.cfg.g, c.cfg.n, c.cfg.d, 2))
    for t in c.values:
        for t1, t2 in decomps.get(t, ()):
            if t1 in c.values and t2 in c.values:
                r = c.values[t] - t.h - (c.values[t1] - t1.h + c.values[t2] - t2.h)
                if r not in (0, 1):
                    out.append(Violation("decomposition", (t, t1, t2), r))
    return out


def restrict(m: UniversalStability, graph: Graph) -> CStability:
    """Values of ``m`` on the triples realized by ``graph``.

    Triples outside the domain of ``m`` (valence 1, from separating edges, when
    ``m`` lives on the valence >= 2 domain) are left out.
    """
    if (graph.g, graph.n) != (m.cfg.g, m.cfg.n):
        raise TypeMismatch(f"graph of type ({graph.g}, {graph.n}) vs condition of type ({m.cfg.g}, {m.cfg.n})")
    if not is_stable(graph):
        raise UnstableVertex("restriction needs a stable graph")
    values = {t: m.values[t] for t in graph_domain(graph) if t in m.values}
    return CStability(m.cfg, values, graph)


def assemble_universal(parts: Iterable[CStability], cfg: DomainConfig) -> UniversalStability:
    """Glue per-graph conditions that agree on overlaps into one universal condition."""
    merged: dict = {}
    for part in parts:
        if (part.cfg.g, part.cfg.n) != (cfg.g, cfg.n):
            raise TypeMismatch("parts must share the type of cfg")
        for t, v in part.values.items():
            if not in_domain(t, cfg):
                continue
            if t in merged and merged[t] != v:
                raise Conflict(t, merged[t], v)
            merged[t] = v
    missing = [t for t in domain_list(cfg) if t not in merged]
    if missing:
        raise Incomplete(missing)
    return UniversalStability(cfg, merged)


def to_vstability(c: CStability) -> VStability:
    """Give each biconnected subset the value of the triple it realizes."""
    if c.graph is None:
        raise TypeMismatch("a graph is needed to pass to subset values")
    values = {}
    for w, t in alpha_masks(c.graph).items():
        if t in c.values:
            values[mask_to_set(w)] = c.values[t]
    return VStability(c.graph, values, c.cfg.d)


def _fibre_values(v: VStability) -> dict:
    by_triple: dict = {}
    for w, t in alpha_masks(v.graph).items():
        s = mask_to_set(w)
        if s in v.values:
            by_triple.setdefault(t, set()).add(v.values[s])
    return by_triple


def is_morphism_compatible(v: VStability) -> bool:
    """True iff subsets realizing the same triple carry the same value."""
    return all(len(vals) == 1 for vals in _fibre_values(v).values())


def from_vstability(v: VStability, cfg: DomainConfig | None = None) -> CStability:
    fibres = _fibre_values(v)
    bad = [t for t, vals in fibres.items() if len(vals) != 1]
    if bad:
        raise NotMorphismCompatible(f"subsets realizing {bad[0]} carry values {sorted(fibres[bad[0]])}")
    if cfg is None:
        cfg = DomainConfig(v.graph.g, v.graph.n, v.d)
    return CStability(cfg, {t: next(iter(vals)) for t, vals in fibres.items()}, v.graph)
