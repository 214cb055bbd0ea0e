"""Stable marked weighted multigraphs (dual graphs of stable pointed curves).

Vertex subsets are exposed as ``frozenset`` of vertex indices; internally most
routines work on integer bitmasks (bit ``i`` = vertex ``i``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import _kernels
from .errors import (
    Disconnected,
    DisconnectedInducedSubgraph,
    EmptySubset,
    InvalidGraph,
    NotInDomain,
    TooLarge,
    UnknownEdge,
    UnstablePair,
    UnstableVertex,
)

MAX_SWEEP_VERTICES = 24
MAX_CANON_VERTICES = 12
MAX_ENUM_VERTICES = 10


@dataclass(frozen=True)
class Vertex:
    genus: int = 0
    markings: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "markings", frozenset(self.markings))
        if self.genus < 0:
            raise InvalidGraph("vertex genus must be nonnegative")


@dataclass(frozen=True)
class SubsetStats:
    val: int
    genus: int
    markings: frozenset


@dataclass(frozen=True)
class Graph:
    """Connected vertex-weighted multigraph with markings in ``{1..n}``.

    ``edges`` are unordered pairs of vertex indices, loops allowed; they are
    stored sorted so that equal graphs compare equal.
    """

    g: int
    n: int
    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        verts = tuple(v if isinstance(v, Vertex) else Vertex(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        edges = tuple(sorted((min(int(a), int(b)), max(int(a), int(b))) for a, b in self.edges))
        object.__setattr__(self, "edges", edges)
        nv = len(verts)
        if nv == 0:
            raise InvalidGraph("a graph needs at least one vertex")
        for a, b in edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise InvalidGraph(f"edge ({a}, {b}) refers to a missing vertex")
        seen = []
        for v in verts:
            seen.extend(v.markings)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise InvalidGraph(f"markings {sorted(seen)} do not partition 1..{self.n}")
        if not _kernels.connected_mask(self.adjacency, self.full_mask):
            raise Disconnected("graph is not connected")
        if total_genus(self) != self.g:
            raise InvalidGraph(f"total genus {total_genus(self)} differs from g={self.g}")

    @classmethod
    def build(cls, vertices, edges, n: int | None = None, g: int | None = None) -> "Graph":
        """Build from ``[(genus, markings), ...]``, inferring ``n`` and ``g`` when omitted."""
        verts = tuple(Vertex(gen, frozenset(marks)) for gen, marks in vertices)
        if n is None:
            n = sum(len(v.markings) for v in verts)
        if g is None:
            g = len(edges) - len(verts) + 1 + sum(v.genus for v in verts)
        return cls(g, n, verts, tuple(edges))

    # cached structure ----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @cached_property
    def adjacency(self) -> tuple:
        """Neighbour bitmask per vertex, loops excluded."""
        adj = [0] * len(self.vertices)
        for a, b in self.edges:
            if a != b:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        return tuple(adj)

    @cached_property
    def valences(self) -> tuple:
        val = [0] * len(self.vertices)
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        return tuple(val)

    @cached_property
    def marking_masks(self) -> tuple:
        """Bitmask over markings (bit i-1 = marking i) per vertex."""
        return tuple(sum(1 << (i - 1) for i in v.markings) for v in self.vertices)

    @cached_property
    def _biconnected(self) -> tuple:
        if len(self.vertices) > MAX_SWEEP_VERTICES:
            raise TooLarge(f"{len(self.vertices)} vertices exceeds the sweep limit {MAX_SWEEP_VERTICES}")
        return tuple(_kernels.biconnected_masks(len(self.vertices), list(self.adjacency)))

    @cached_property
    def _mask_stats(self) -> dict:
        masks = self._biconnected
        us = [a for a, _ in self.edges]
        vs = [b for _, b in self.edges]
        counts = _kernels.mask_edge_stats(us, vs, masks)
        out = {}
        for w, (val, inner) in zip(masks, counts):
            out[w] = (val, inner - popcount(w) + 1 + self._genus_sum(w), self._marks(w))
        return out

    def _genus_sum(self, mask: int) -> int:
        return sum(v.genus for i, v in enumerate(self.vertices) if mask >> i & 1)

    def _marks(self, mask: int) -> frozenset:
        out = set()
        for i, v in enumerate(self.vertices):
            if mask >> i & 1:
                out |= v.markings
        return frozenset(out)

    def mask_of(self, subset: Iterable[int]) -> int:
        mask = 0
        for i in subset:
            if not 0 <= i < len(self.vertices):
                raise InvalidGraph(f"no vertex {i}")
            mask |= 1 << i
        return mask

    def separating_edges(self) -> list:
        """Indices of non-loop edges whose removal disconnects the graph."""
        out = []
        for k, (a, b) in enumerate(self.edges):
            if a == b:
                continue
            rest = self.edges[:k] + self.edges[k + 1:]
            adj = [0] * len(self.vertices)
            for x, y in rest:
                if x != y:
                    adj[x] |= 1 << y
                    adj[y] |= 1 << x
            if not _kernels.connected_mask(adj, self.full_mask):
                out.append(k)
        return out

    def is_two_connected(self) -> bool:
        return not self.separating_edges()

    def is_trivalent(self) -> bool:
        return all(
            v.genus == 0 and self.valences[i] + len(v.markings) == 3
            for i, v in enumerate(self.vertices)
        )

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with old vertex ``i`` moved to position ``perm[i]``."""
        verts = [None] * len(self.vertices)
        for i, v in enumerate(self.vertices):
            verts[perm[i]] = v
        return Graph(self.g, self.n, tuple(verts), tuple((perm[a], perm[b]) for a, b in self.edges))

    # serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "vertices": [{"genus": v.genus, "markings": sorted(v.markings)} for v in self.vertices],
            "edges": [[a, b] for a, b in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        verts = tuple(Vertex(int(v["genus"]), frozenset(int(i) for i in v["markings"])) for v in data["vertices"])
        return cls(int(data["g"]), int(data["n"]), verts, tuple(tuple(e) for e in data["edges"]))


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def total_genus(graph: Graph) -> int:
    """First Betti number plus the sum of vertex genera."""
    if not _kernels.connected_mask(graph.adjacency, graph.full_mask):
        raise Disconnected("total genus is defined for connected graphs only")
    return len(graph.edges) - len(graph.vertices) + 1 + sum(v.genus for v in graph.vertices)


def is_stable(graph: Graph) -> bool:
    return all(
        2 * v.genus - 2 + graph.valences[i] + len(v.markings) > 0
        for i, v in enumerate(graph.vertices)
    )


def subset_stats(graph: Graph, subset: Iterable[int]) -> SubsetStats:
    """Valence, genus and markings of the subgraph induced by ``subset``."""
    mask = graph.mask_of(subset)
    if mask == 0:
        raise EmptySubset("vertex subset is empty")
    if not _kernels.connected_mask(graph.adjacency, mask):
        raise DisconnectedInducedSubgraph("induced subgraph is not connected")
    val, inner = _kernels.mask_edge_stats([a for a, _ in graph.edges], [b for _, b in graph.edges], [mask])[0]
    genus = inner - popcount(mask) + 1 + graph._genus_sum(mask)
    return SubsetStats(val, genus, graph._marks(mask))


def is_biconnected_subset(graph: Graph, subset: Iterable[int]) -> bool:
    mask = graph.mask_of(subset)
    comp = graph.full_mask ^ mask
    if mask == 0 or comp == 0:
        return False
    return _kernels.connected_mask(graph.adjacency, mask) and _kernels.connected_mask(graph.adjacency, comp)


def biconnected_masks(graph: Graph) -> tuple:
    return graph._biconnected


def biconnected_subsets(graph: Graph) -> list:
    """Every nonempty proper vertex subset W with W and its complement connected."""
    return sorted((mask_to_set(w) for w in graph._biconnected), key=lambda s: tuple(sorted(s)))


def mask_stats(graph: Graph, mask: int) -> tuple:
    """(val, genus, markings) of a biconnected mask, from the cached sweep."""
    return graph._mask_stats[mask]


# contraction -----------------------------------------------------------------


@dataclass(frozen=True)
class Contraction:
    source: Graph
    target: Graph
    vertex_map: tuple
    contracted_edges: frozenset


def contract(graph: Graph, edges: Iterable[int]) -> Contraction:
    """Contract the edges with the given indices (positions in ``graph.edges``)."""
    chosen = set()
    for k in edges:
        if not isinstance(k, int) or not 0 <= k < len(graph.edges):
            raise UnknownEdge(f"no edge with index {k!r}")
        chosen.add(k)
    nv = len(graph.vertices)
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in chosen:
        a, b = graph.edges[k]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(i) for i in range(nv)})
    index = {r: i for i, r in enumerate(roots)}
    vertex_map = tuple(index[find(i)] for i in range(nv))
    genus = [0] * len(roots)
    marks = [set() for _ in roots]
    size = [0] * len(roots)
    for i, v in enumerate(graph.vertices):
        t = vertex_map[i]
        genus[t] += v.genus
        marks[t] |= v.markings
        size[t] += 1
    inner = [0] * len(roots)
    for k in chosen:
        inner[vertex_map[graph.edges[k][0]]] += 1
    for t in range(len(roots)):
        # contracted edges beyond a spanning tree of the merged block become genus
        genus[t] += inner[t] - size[t] + 1
    new_edges = tuple(
        (vertex_map[a], vertex_map[b]) for k, (a, b) in enumerate(graph.edges) if k not in chosen
    )
    target = Graph(graph.g, graph.n, tuple(Vertex(genus[t], frozenset(marks[t])) for t in range(len(roots))), new_edges)
    return Contraction(graph, target, vertex_map, frozenset(chosen))


# canonical labelling ---------------------------------------------------------


def _rank(signatures):
    order = sorted(set(signatures))
    pos = {s: i for i, s in enumerate(order)}
    return [pos[s] for s in signatures]


def _refine(colors, nbrs):
    ncls = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted((colors[u], m) for u, m in nbrs[v])))
            for v in range(len(colors))
        ]
        new = _rank(sigs)
        k = len(set(new))
        if k == ncls:
            return new
        colors, ncls = new, k


def _encode(graph: Graph, order: Sequence[int]):
    pos = {v: i for i, v in enumerate(order)}
    verts = tuple((graph.vertices[v].genus, tuple(sorted(graph.vertices[v].markings))) for v in order)
    edges = tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in graph.edges))
    return (graph.g, graph.n, verts, edges)


def canonical_labeling(graph: Graph) -> tuple:
    """Return ``(encoding, order)`` where ``order[i]`` is the original vertex placed at position ``i``.

    Partition refinement on (genus, markings, loops, valence) followed by
    individualisation of the first non-singleton cell; the lexicographically
    least leaf encoding wins.
    """
    nv = len(graph.vertices)
    if nv > MAX_CANON_VERTICES:
        raise TooLarge(f"canonical form limited to {MAX_CANON_VERTICES} vertices")
    mult: dict = {}
    loops = [0] * nv
    for a, b in graph.edges:
        if a == b:
            loops[a] += 1
        else:
            mult[(a, b)] = mult.get((a, b), 0) + 1
            mult[(b, a)] = mult.get((b, a), 0) + 1
    nbrs = [[] for _ in range(nv)]
    for (a, b), m in mult.items():
        nbrs[a].append((b, m))
    init = _rank([
        (v.genus, tuple(sorted(v.markings)), loops[i], graph.valences[i])
        for i, v in enumerate(graph.vertices)
    ])
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(colors, nbrs)
        if len(set(colors)) == nv:
            order = sorted(range(nv), key=lambda v: colors[v])
            enc = _encode(graph, order)
            if best is None or enc < best[0]:
                best = (enc, tuple(order))
            return
        counts: dict = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        cell = min(c for c, k in counts.items() if k > 1)
        for v in range(nv):
            if colors[v] == cell:
                search(_rank([(colors[u], 0 if u == v else 1) for u in range(nv)]))

    search(init)
    enc, order = best
    return repr(enc).encode(), order


def canonical_form(graph: Graph) -> bytes:
    return canonical_labeling(graph)[0]


def is_isomorphic(g1: Graph, g2: Graph) -> dict | None:
    """A genus-, marking- and multiplicity-preserving bijection ``V(g1) -> V(g2)``, or None."""
    if (g1.g, g1.n, len(g1.vertices), len(g1.edges)) != (g2.g, g2.n, len(g2.vertices), len(g2.edges)):
        return None
    e1, o1 = canonical_labeling(g1)
    e2, o2 = canonical_labeling(g2)
    if e1 != e2:
        return None
    return {o1[i]: o2[i] for i in range(len(o1))}


def canonical_graph(graph: Graph) -> Graph:
    _, order = canonical_labeling(graph)
    perm = [0] * len(order)
    for i, v in enumerate(order):
        perm[v] = i
    return graph.relabel(perm)


# enumeration -----------------------------------------------------------------


def _set_partitions(items, max_block):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(0, min(max_block - 1, len(rest)) + 1):
        for others in itertools.combinations(rest, k):
            remaining = [x for x in rest if x not in others]
            for tail in _set_partitions(remaining, max_block):
                yield [(first,) + others] + tail


def _multigraphs(degrees):
    """All loop-allowed multigraphs with the given degree sequence, edges in sorted order."""
    nv = len(degrees)
    rem = list(degrees)
    edges = []

    def rec(last):
        i = next((v for v in range(nv) if rem[v] > 0), None)
        if i is None:
            yield tuple(edges)
            return
        start = last[1] if last is not None and last[0] == i else i
        for j in range(start, nv):
            if j == i:
                if rem[i] < 2:
                    continue
                rem[i] -= 2
            else:
                if rem[j] < 1:
                    continue
                rem[i] -= 1
                rem[j] -= 1
            edges.append((i, j))
            yield from rec((i, j))
            edges.pop()
            if j == i:
                rem[i] += 2
            else:
                rem[i] += 1
                rem[j] += 1

    yield from rec(None)


def _check_pair(g: int, n: int):
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise UnstablePair(f"(g, n) = ({g}, {n}) is not hyperbolic")
    if 2 * g - 2 + n > MAX_ENUM_VERTICES:
        raise TooLarge(f"trivalent graphs of type ({g}, {n}) have {2 * g - 2 + n} vertices (limit {MAX_ENUM_VERTICES})")


def enumerate_trivalent(g: int, n: int) -> list:
    """One representative per isomorphism class of trivalent stable graphs of type (g, n)."""
    _check_pair(g, n)
    nv = 2 * g - 2 + n
    found: dict = {}
    for blocks in _set_partitions(list(range(1, n + 1)), 3):
        if len(blocks) > nv:
            continue
        marks = [frozenset(b) for b in blocks] + [frozenset()] * (nv - len(blocks))
        degrees = [3 - len(m) for m in marks]
        verts = tuple(Vertex(0, m) for m in marks)
        for edges in _multigraphs(degrees):
            adj = [0] * nv
            for a, b in edges:
                if a != b:
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
            if not _kernels.connected_mask(adj, (1 << nv) - 1):
                continue
            graph = Graph(g, n, verts, edges)
            key = canonical_form(graph)
            if key not in found:
                found[key] = canonical_graph(graph)
    return [found[k] for k in sorted(found)]


def enumerate_stable_graphs(g: int, n: int, trivalent_only: bool = False) -> list:
    """Stable graphs of type (g, n) up to isomorphism.

    The trivalent ones are generated directly; the full list is their closure
    under single-edge contractions.
    """
    trivalent = enumerate_trivalent(g, n)
    if trivalent_only:
        return trivalent
    found = {canonical_form(t): t for t in trivalent}
    frontier = list(trivalent)
    while frontier:
        nxt = []
        for graph in frontier:
            for k in range(len(graph.edges)):
                target = contract(graph, [k]).target
                key = canonical_form(target)
                if key not in found:
                    found[key] = canonical_graph(target)
                    nxt.append(found[key])
        frontier = nxt
    return [found[k] for k in sorted(found)]


def vine_graph(e: int, h: int, A: Iterable[int], g: int, n: int, min_valence: int = 2) -> Graph:
    """Two vertices ``(h, A)`` and ``(g+1-e-h, A^c)`` joined by ``e`` edges."""
    from .domain import DomainConfig, Triple, in_domain

    A = frozenset(A)
    cfg = DomainConfig(g, n, 0, min_valence)
    if not in_domain(Triple(e, h, A), cfg):
        raise NotInDomain(f"({e}, {h}, {sorted(A)}) is not in the stability domain of type ({g}, {n})")
    v1 = Vertex(h, A)
    v2 = Vertex(g + 1 - e - h, frozenset(range(1, n + 1)) - A)
    graph = Graph(g, n, (v1, v2), tuple((0, 1) for _ in range(e)))
    if not is_stable(graph):
        raise UnstableVertex(f"vine graph V({e}, {h}, {sorted(A)}) has an unstable vertex")
    return graph
