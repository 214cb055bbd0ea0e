"""Stability-domain triples ``(e, h, A)``: the universal domain, the per-graph
domain, the complement involution and decompositions into pairs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import NotInDomain, NotRealized, UnstablePair
from .graph import Graph, biconnected_masks, mask_stats, mask_to_set


@dataclass(frozen=True)
class Triple:
    """Valence ``e``, genus ``h`` and marking set ``A`` of one side of a vine graph."""

    e: int
    h: int
    A: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.A)

    @property
    def key(self) -> tuple:
        return (self.e, self.h, self.mask)

    def __lt__(self, other: "Triple") -> bool:
        return self.key < other.key

    def __le__(self, other: "Triple") -> bool:
        return self.key <= other.key

    def __repr__(self) -> str:
        marks = "{" + ",".join(str(i) for i in sorted(self.A)) + "}"
        return f"({self.e},{self.h},{marks})"

    def to_json(self) -> dict:
        return {"e": self.e, "h": self.h, "A": sorted(self.A)}

    @classmethod
    def from_json(cls, data: dict) -> "Triple":
        return cls(int(data["e"]), int(data["h"]), frozenset(int(i) for i in data["A"]))


@dataclass(frozen=True)
class DomainConfig:
    g: int
    n: int
    d: int = 0
    min_valence: int = 2

    def __post_init__(self):
        if self.g < 0 or self.n < 0 or 2 * self.g - 2 + self.n <= 0:
            raise UnstablePair(f"(g, n) = ({self.g}, {self.n}) is not hyperbolic")
        if self.min_valence not in (1, 2):
            raise ValueError("min_valence must be 1 or 2")

    @property
    def all_marks(self) -> frozenset:
        return frozenset(range(1, self.n + 1))

    def with_degree(self, d: int) -> "DomainConfig":
        return DomainConfig(self.g, self.n, d, self.min_valence)


def _subsets(items: tuple):
    for bits in range(1 << len(items)):
        yield frozenset(x for i, x in enumerate(items) if bits >> i & 1)


def in_domain(t: Triple, cfg: DomainConfig) -> bool:
    g = cfg.g
    if not (cfg.min_valence <= t.e <= g + 1 and 0 <= t.h <= g + 1 - t.e):
        return False
    if not t.A <= cfg.all_marks:
        return False
    if t.e == 2 and ((t.h == 0 and not t.A) or (t.h == g - 1 and t.A == cfg.all_marks)):
        return False
    return True


@lru_cache(maxsize=None)
def _domain_list(g: int, n: int, min_valence: int) -> tuple:
    cfg = DomainConfig(g, n, 0, min_valence)
    marks = tuple(range(1, n + 1))
    out = []
    for e in range(min_valence, g + 2):
        for h in range(0, g + 2 - e):
            for A in _subsets(marks):
                t = Triple(e, h, A)
                if in_domain(t, cfg):
                    out.append(t)
    out.sort()
    return tuple(out)


def domain_list(cfg: DomainConfig) -> tuple:
    """The universal domain sorted by ``(e, h, bitmask(A))``."""
    return _domain_list(cfg.g, cfg.n, cfg.min_valence)


def universal_domain(cfg: DomainConfig) -> frozenset:
    return frozenset(domain_list(cfg))


def complement(t: Triple, cfg: DomainConfig) -> Triple:
    if not in_domain(t, cfg):
        raise NotInDomain(f"{t} is not in the domain of type ({cfg.g}, {cfg.n})")
    return Triple(t.e, cfg.g + 1 - t.e - t.h, cfg.all_marks - t.A)


def canonical_rep(t: Triple, cfg: DomainConfig) -> Triple:
    """The smaller of ``t`` and its complement."""
    c = complement(t, cfg)
    return c if c.key < t.key else t


@lru_cache(maxsize=None)
def _canonical_list(g: int, n: int, min_valence: int) -> tuple:
    cfg = DomainConfig(g, n, 0, min_valence)
    return tuple(t for t in _domain_list(g, n, min_valence) if canonical_rep(t, cfg) == t)


def canonical_reps(cfg: DomainConfig) -> tuple:
    return _canonical_list(cfg.g, cfg.n, cfg.min_valence)


def is_compatible_decomposition(t: Triple, t1: Triple, t2: Triple) -> bool:
    """Marking split, genus balance and a non-degenerate triangle on the valences."""
    if t1.A & t2.A or (t1.A | t2.A) != t.A:
        return False
    if 2 * (t.h + 1 - t1.h - t2.h) != t1.e + t2.e - t.e:
        return False
    return t.e < t1.e + t2.e and t1.e < t.e + t2.e and t2.e < t.e + t1.e


def _decompositions(t: Triple, cfg: DomainConfig) -> list:
    out = []
    marks = tuple(sorted(t.A))
    top = cfg.g + 1
    for A1 in _subsets(marks):
        A2 = t.A - A1
        for e1 in range(cfg.min_valence, top + 1):
            for e2 in range(cfg.min_valence, top + 1):
                s = e1 + e2 - t.e
                if s <= 0 or s % 2:
                    continue
                hsum = t.h + 1 - s // 2
                for h1 in range(0, hsum + 1):
                    t1 = Triple(e1, h1, A1)
                    t2 = Triple(e2, hsum - h1, A2)
                    if t2.key < t1.key:
                        continue
                    if not (in_domain(t1, cfg) and in_domain(t2, cfg)):
                        continue
                    if is_compatible_decomposition(t, t1, t2):
                        out.append((t1, t2))
    out.sort(key=lambda p: (p[0].key, p[1].key))
    return out


def decompositions(t: Triple, cfg: DomainConfig) -> list:
    """Unordered pairs ``(t1, t2)`` (with ``t1 <= t2``) compatible with ``t``."""
    if not in_domain(t, cfg):
        raise NotInDomain(f"{t} is not in the domain of type ({cfg.g}, {cfg.n})")
    return list(all_decompositions(cfg).get(t, ()))


@lru_cache(maxsize=None)
def _all_decompositions(g: int, n: int, min_valence: int) -> dict:
    cfg = DomainConfig(g, n, 0, min_valence)
    return {t: tuple(_decompositions(t, cfg)) for t in _domain_list(g, n, min_valence)}


def all_decompositions(cfg: DomainConfig) -> dict:
    """Map every domain triple to its decomposition pairs (cached per type)."""
    return _all_decompositions(cfg.g, cfg.n, cfg.min_valence)


def decomposition_triples(cfg: DomainConfig):
    """Iterate ``(t, t1, t2)`` over every decomposition of every domain triple."""
    for t, pairs in all_decompositions(cfg).items():
        for t1, t2 in pairs:
            yield t, t1, t2


# per-graph domain -------------------------------------------------------------


def alpha_masks(graph: Graph) -> dict:
    """Map each biconnected vertex mask to its triple (val, genus, markings)."""
    out = {}
    for w in biconnected_masks(graph):
        val, genus, marks = mask_stats(graph, w)
        out[w] = Triple(val, genus, marks)
    return out


def _subset_order(s: frozenset) -> tuple:
    return tuple(sorted(s))


def graph_domain(graph: Graph) -> dict:
    """Triples realized by biconnected subsets, each with its sorted realizing subsets."""
    fibres: dict = {}
    for w, t in alpha_masks(graph).items():
        fibres.setdefault(t, []).append(mask_to_set(w))
    for t in fibres:
        fibres[t].sort(key=_subset_order)
    return dict(sorted(fibres.items(), key=lambda kv: kv[0].key))


def pick_realizing_subset(graph: Graph, t: Triple) -> frozenset:
    """The lexicographically least biconnected subset realizing ``t``."""
    fibres = graph_domain(graph)
    if t not in fibres:
        raise NotRealized(f"{t} is not realized on this graph")
    return fibres[t][0]


def triples_from_json(items: Iterable[dict]) -> list:
    return [Triple.from_json(x) for x in items]
