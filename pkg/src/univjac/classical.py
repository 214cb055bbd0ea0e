"""Conditions induced by rational divisors, and the linear systems deciding
whether an integer condition arises that way."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .domain import DomainConfig, Triple, alpha_masks, canonical_reps, complement
from .errors import FiberDisagreement, NonGeneric, OutOfScope
from .feasibility import Certificate, LinearForm, LinearSystem, Witness, eq, gt, lt, solve
from .graph import Graph, biconnected_masks, enumerate_stable_graphs, mask_stats, mask_to_set
from .stability import CStability, UniversalStability, restrict


@dataclass(frozen=True)
class GraphDivisor:
    """Rational weight on each vertex of ``graph``; the total is the degree."""

    graph: Graph
    phi: tuple

    def __post_init__(self):
        phi = tuple(Fraction(p) for p in self.phi)
        if len(phi) != len(self.graph.vertices):
            raise ValueError("one weight per vertex")
        object.__setattr__(self, "phi", phi)

    @property
    def d(self) -> Fraction:
        return sum(self.phi, Fraction(0))

    def on(self, mask: int) -> Fraction:
        return sum((p for i, p in enumerate(self.phi) if mask >> i & 1), Fraction(0))


@dataclass(frozen=True)
class MarkingVector:
    """Weights ``x[i-1]`` at the vertex carrying marking ``i``; unmarked vertices share the rest."""

    g: int
    n: int
    d: int
    x: tuple

    def __post_init__(self):
        x = tuple(Fraction(v) for v in self.x)
        if len(x) != self.n:
            raise ValueError(f"expected {self.n} weights, got {len(x)}")
        object.__setattr__(self, "x", x)

    def on(self, marks: Iterable[int]) -> Fraction:
        return sum((self.x[i - 1] for i in marks), Fraction(0))

    @property
    def cfg(self) -> DomainConfig:
        return DomainConfig(self.g, self.n, self.d)


def marking_variable(i: int) -> str:
    return f"x{i}"


def vertex_variable(v: int) -> str:
    return f"phi{v}"


def _need_genus(g: int):
    if g < 2:
        raise OutOfScope("classicality is handled for genus at least 2 only")


# single graph -------------------------------------------------------------------


def _wall_value(div: GraphDivisor, mask: int) -> Fraction:
    val = mask_stats(div.graph, mask)[0]
    return div.on(mask) - Fraction(val, 2)


def is_general(div: GraphDivisor) -> bool:
    """No biconnected subset sits on a wall ``phi_W - val(W)/2`` in Z."""
    return all(_wall_value(div, w).denominator != 1 for w in biconnected_masks(div.graph))


def induce_on_graph(div: GraphDivisor, cfg: DomainConfig | None = None) -> CStability:
    """``ceil(phi_Z - val(Z)/2)`` on every triple realized by the graph.

    Triples with valence below ``cfg.min_valence`` are left out, as in
    :func:`restrict`.
    """
    graph = div.graph
    if cfg is None:
        d = div.d
        if d.denominator != 1:
            raise ValueError("divisor degree must be an integer")
        cfg = DomainConfig(graph.g, graph.n, int(d))
    values: dict = {}
    for w, t in alpha_masks(graph).items():
        if t.e < cfg.min_valence:
            continue
        x = _wall_value(div, w)
        if x.denominator == 1:
            raise NonGeneric(f"subset {sorted(mask_to_set(w))} lies on a wall", t)
        v = ceil(x)
        if t in values and values[t] != v:
            raise FiberDisagreement(f"subsets realizing {t} induce {values[t]} and {v}")
        values[t] = v
    return CStability(cfg, values, graph)


def divisor_from_marking_vector(graph: Graph, x: MarkingVector) -> GraphDivisor:
    """Marked vertices get the sum of their weights, genus-0 unmarked ones the common rest."""
    unlabeled = [i for i, v in enumerate(graph.vertices) if not v.markings]
    if any(graph.vertices[i].genus for i in unlabeled):
        raise ValueError("unmarked vertices must have genus 0")
    share = (Fraction(x.d) - sum(x.x, Fraction(0))) / len(unlabeled) if unlabeled else Fraction(0)
    phi = [x.on(v.markings) if v.markings else share for v in graph.vertices]
    return GraphDivisor(graph, tuple(phi))


# universal ---------------------------------------------------------------------


def induced_form(t: Triple, cfg: DomainConfig) -> LinearForm:
    """The ceiling argument for ``t`` as a linear form in ``x1..xn``."""
    _need_genus(cfg.g)
    g, d = cfg.g, cfg.d
    k = t.e + 2 * t.h - 2
    denom = 2 * g - 2
    coeffs = {}
    for i in range(1, cfg.n + 1):
        coeffs[marking_variable(i)] = Fraction(2 * g - t.e - 2 * t.h if i in t.A else -k, denom)
    return LinearForm(coeffs, Fraction(k * (d + 1 - g), denom))


def _point(x: MarkingVector) -> dict:
    return {marking_variable(i + 1): v for i, v in enumerate(x.x)}


def induced_argument(t: Triple, x: MarkingVector) -> Fraction:
    return induced_form(t, x.cfg).evaluate(_point(x))


def induced_value(t: Triple, x: MarkingVector) -> int:
    """``ceil(X_t(x)) + h - 1``; raises NonGeneric when ``X_t(x)`` is an integer."""
    X = induced_argument(t, x)
    if X.denominator == 1:
        raise NonGeneric(f"the argument at {t} is the integer {X}", t)
    return ceil(X) + t.h - 1


def induce_universal(x: MarkingVector) -> UniversalStability:
    cfg = x.cfg
    _need_genus(cfg.g)
    return UniversalStability(cfg, {t: induced_value(t, x) for t in canonical_reps(cfg)})


def classicality_system_universal(m: UniversalStability) -> LinearSystem:
    """For each canonical triple, ``m_t - h < X_t(x) < m_t - h + 1``."""
    cfg = m.cfg
    _need_genus(cfg.g)
    cons, labels = [], []
    for t in canonical_reps(cfg):
        X = induced_form(t, cfg)
        base = m[t] - t.h
        cons.append(gt(X, base))
        labels.append(f"{t} lower")
        cons.append(lt(X, base + 1))
        labels.append(f"{t} upper")
    variables = tuple(marking_variable(i) for i in range(1, cfg.n + 1))
    return LinearSystem(tuple(cons), variables, tuple(labels))


@dataclass(frozen=True)
class Verdict:
    classical: bool
    system: LinearSystem
    witness: Witness | None = None
    certificate: Certificate | None = None
    point: object = None  # MarkingVector or GraphDivisor when classical

    def __bool__(self) -> bool:
        return self.classical


def is_universally_classical(m: UniversalStability) -> Verdict:
    system = classicality_system_universal(m)
    out = solve(system)
    if isinstance(out, Certificate):
        return Verdict(False, system, certificate=out)
    cfg = m.cfg
    x = MarkingVector(cfg.g, cfg.n, cfg.d, tuple(out.values.get(marking_variable(i), 0) for i in range(1, cfg.n + 1)))
    if induce_universal(x) != m:
        raise AssertionError("internal error: witness does not reproduce the condition")
    return Verdict(True, system, witness=out, point=x)


SHARED_VARIABLE = "u"


def _vertex_names(graph: Graph, shared_unlabeled: bool) -> list:
    names = []
    for i, v in enumerate(graph.vertices):
        if shared_unlabeled and not v.markings and v.genus == 0:
            names.append(SHARED_VARIABLE)
        else:
            names.append(vertex_variable(i))
    return names


def classicality_system_graph(graph: Graph, c: CStability, shared_unlabeled: bool = False) -> LinearSystem:
    """Per-vertex weights summing to ``d`` with ``n_Z - 1 < phi_Z - val(Z)/2 < n_Z``.

    One subset per complementary pair, unless the values on the pair break the
    complement-sum law, in which case both are kept.  With ``shared_unlabeled``
    every unmarked genus-0 vertex carries the same weight ``u``, which is what
    a divisor coming from a marking vector looks like.
    """
    per_vertex = _vertex_names(graph, shared_unlabeled)
    d = c.cfg.d
    total = LinearForm({})
    for name in per_vertex:
        total = total + LinearForm.var(name)
    cons, labels = [eq(total, d)], ["total degree"]
    alpha = alpha_masks(graph)
    full = graph.full_mask
    for w, t in alpha.items():
        if t not in c.values:
            continue
        comp = full ^ w
        tc = alpha[comp]
        if w > comp and tc in c.values and c.values[tc] == d + 1 - t.e - c.values[t]:
            continue
        form = LinearForm.constant(Fraction(-t.e, 2))
        for i, name in enumerate(per_vertex):
            if w >> i & 1:
                form = form + LinearForm.var(name)
        target = c.values[t]
        subset = "{" + ",".join(str(i) for i in sorted(mask_to_set(w))) + "}"
        cons.append(gt(form, target - 1))
        labels.append(f"W={subset} {t} lower")
        cons.append(lt(form, target))
        labels.append(f"W={subset} {t} upper")
    variables = tuple(dict.fromkeys(per_vertex))
    return LinearSystem(tuple(cons), variables, tuple(labels))


def is_fibre_classical(graph: Graph, c: CStability, shared_unlabeled: bool = False) -> Verdict:
    system = classicality_system_graph(graph, c, shared_unlabeled)
    out = solve(system)
    if isinstance(out, Certificate):
        return Verdict(False, system, certificate=out)
    names = _vertex_names(graph, shared_unlabeled)
    div = GraphDivisor(graph, tuple(out.values.get(name, 0) for name in names))
    return Verdict(True, system, witness=out, point=div)


@dataclass(frozen=True)
class FibreReport:
    verdicts: tuple  # (graph, Verdict) pairs
    offending: tuple  # graphs whose fibre is not classical

    @property
    def all_classical(self) -> bool:
        return not self.offending


def everywhere_fibre_classical(
    m: UniversalStability, graphs: Sequence[Graph] | None = None, shared_unlabeled: bool = False
) -> FibreReport:
    """Fibre verdicts over ``graphs`` (default: every trivalent graph of the type)."""
    if graphs is None:
        graphs = enumerate_stable_graphs(m.cfg.g, m.cfg.n, trivalent_only=True)
    verdicts = []
    offending = []
    for graph in graphs:
        v = is_fibre_classical(graph, restrict(m, graph), shared_unlabeled)
        verdicts.append((graph, v))
        if not v.classical:
            offending.append(graph)
    return FibreReport(tuple(verdicts), tuple(offending))


def complement_identity_holds(t: Triple, cfg: DomainConfig) -> bool:
    """``X_t + X_complement(t)`` is the constant ``d + 1 - g``."""
    total = induced_form(t, cfg) + induced_form(complement(t, cfg), cfg)
    return total.is_constant() and total.const == cfg.d + 1 - cfg.g
