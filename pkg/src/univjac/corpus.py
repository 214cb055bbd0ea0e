"""Built-in example conditions and graphs.

The tables are embedded data copied row by row, so that checks run against
them test the engine rather than the engine against itself.
"""

from __future__ import annotations

from itertools import combinations

from .domain import DomainConfig, Triple, domain_list
from .graph import Graph, Vertex
from .stability import UniversalStability

# column order of the (2,4) table
_COLUMNS_2_4 = ["", "1", "2", "3", "4", "12", "13", "14", "23", "24", "34", "123", "124", "134", "234", "1234"]

# rows (e, h); None marks a triple outside the domain
TABLE_2_4 = {
    (2, 0): [None, 1, 0, 0, 0, 1, 1, 2, 0, 0, 0, 2, 2, 2, 0, 2],
    (3, 0): [-2, -1, -2, -2, -2, -1, -1, 0, -2, -1, -1, 0, 0, 0, -1, 0],
    (2, 1): [-3, -1, -3, -3, -3, -1, -1, -1, -3, -2, -2, -1, -1, -1, -2, None],
}

# (3,2) table: rows are marking sets, columns (e, h)
_COLUMNS_3_2 = [(2, 0), (3, 0), (4, 0), (2, 1), (3, 1), (2, 2)]
TABLE_3_2 = {
    "": [None, 0, 1, 2, 3, 4],
    "1": [0, 1, 2, 2, 3, 5],
    "2": [0, 1, 1, 3, 3, 5],
    "12": [1, 1, 2, 3, 4, None],
}

# three-element sets in the distinguished family for the (2,6) example
SPECIAL_TRIPLES_2_6 = [
    {1, 3, 5}, {1, 2, 3}, {1, 5, 6}, {1, 2, 4}, {1, 3, 6},
    {3, 4, 5}, {3, 4, 6}, {2, 5, 6}, {2, 3, 5}, {2, 3, 6},
]

EXAMPLE_IDS = ("ex_2_6", "ex_2_4", "ex_3_2", "ex_g_1")
GRAPH_IDS = ("fig2", "fig3", "fig4")


def _marks(label: str) -> frozenset:
    return frozenset(int(c) for c in label)


def table_2_4() -> dict:
    """Map triple -> value, read from the (2,4) table."""
    out = {}
    for (e, h), row in TABLE_2_4.items():
        for label, v in zip(_COLUMNS_2_4, row):
            if v is not None:
                out[Triple(e, h, _marks(label))] = v
    return out


def table_3_2() -> dict:
    out = {}
    for label, row in TABLE_3_2.items():
        for (e, h), v in zip(_COLUMNS_3_2, row):
            if v is not None:
                out[Triple(e, h, _marks(label))] = v
    return out


def ex_2_4() -> UniversalStability:
    return UniversalStability(DomainConfig(2, 4, 0), table_2_4())


def ex_3_2() -> UniversalStability:
    return UniversalStability(DomainConfig(3, 2, 6), table_3_2())


def special_family_2_6() -> set:
    """Sets A of markings with ``(3,0,A)`` valued 0: all sets of size <= 2 plus the listed triples."""
    fam = set()
    for k in range(3):
        for c in combinations(range(1, 7), k):
            fam.add(frozenset(c))
    fam.update(frozenset(s) for s in SPECIAL_TRIPLES_2_6)
    return fam


def ex_2_6() -> UniversalStability:
    cfg = DomainConfig(2, 6, 3)
    fam = special_family_2_6()
    values = {}
    for t in domain_list(cfg):
        if (t.e, t.h) == (2, 0):
            values[t] = 0
        elif (t.e, t.h) == (3, 0):
            values[t] = 0 if t.A in fam else 1
        else:
            values[t] = 2
    return UniversalStability(cfg, values)


def ex_g_1(g: int) -> UniversalStability:
    """Degree g+1 family of type (g, 1), g >= 4."""
    if g < 4:
        raise ValueError("the (g,1) family needs g >= 4")
    cfg = DomainConfig(g, 1, g + 1)
    one = frozenset({1})
    values = {}
    for t in domain_list(cfg):
        if t in (Triple(2, 0, one), Triple(3, 0, one)):
            v = 0
        elif t == Triple(2, 1, one):
            v = 1
        elif t.h >= g - 2:
            v = t.h + 1
        else:
            v = t.h + (1 if t.A == one else 0)
        values[t] = v
    return UniversalStability(cfg, values)


def _graph(g, n, marks_by_vertex, edges) -> Graph:
    return Graph(g, n, tuple(Vertex(0, frozenset(m)) for m in marks_by_vertex), tuple(edges))


def fig2() -> Graph:
    """Two hubs (0 and 7) joined by three paths 0-1-2-7, 0-3-4-7, 0-5-6-7; vertex i carries marking i."""
    marks = [(), (1,), (2,), (3,), (4,), (5,), (6,), ()]
    edges = [(0, 3), (0, 1), (0, 5), (4, 3), (5, 6), (1, 2), (7, 6), (7, 2), (7, 4)]
    return _graph(2, 6, marks, edges)


def fig3() -> Graph:
    """Six-vertex ladder with markings 1 and 2 at opposite corners."""
    # vertex labels follow the drawing: 0 (marking 1), 1, 2, 7 (marking 2), 5, 6
    drawn = [0, 1, 2, 7, 5, 6]
    pos = {v: i for i, v in enumerate(drawn)}
    marks = [(1,), (), (), (2,), (), ()]
    drawn_edges = [(0, 1), (5, 6), (1, 2), (7, 2), (1, 5), (2, 6), (0, 5), (7, 6)]
    return _graph(3, 2, marks, [(pos[a], pos[b]) for a, b in drawn_edges])


def fig4(g: int) -> Graph:
    """Trivalent ladder of genus g with one marking.

    The marked vertex 0 is joined to both ends ``a1``, ``b1`` of the first
    rung; ``g - 1`` rungs ``a_i - b_i`` are linked along two rails, and the last
    rung is doubled so every vertex has valence 3.
    """
    if g < 2:
        raise ValueError("genus at least 2")
    rungs = g - 1

    def a(i):
        return 2 * i - 1

    def b(i):
        return 2 * i

    edges = [(0, a(1)), (0, b(1))]
    for i in range(1, rungs + 1):
        edges.append((a(i), b(i)))
        if i < rungs:
            edges.append((a(i), a(i + 1)))
            edges.append((b(i), b(i + 1)))
    edges.append((a(rungs), b(rungs)))
    marks = [(1,)] + [()] * (2 * rungs)
    return _graph(g, 1, marks, edges)


def example(name: str, g: int | None = None) -> UniversalStability:
    if name == "ex_2_6":
        return ex_2_6()
    if name == "ex_2_4":
        return ex_2_4()
    if name == "ex_3_2":
        return ex_3_2()
    if name == "ex_g_1":
        return ex_g_1(4 if g is None else g)
    raise KeyError(name)


def figure(name: str, g: int | None = None) -> Graph:
    if name == "fig2":
        return fig2()
    if name == "fig3":
        return fig3()
    if name == "fig4":
        return fig4(4 if g is None else g)
    raise KeyError(name)
