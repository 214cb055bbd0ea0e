import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import domain_triples, oracle_complement, oracle_decompositions
from univjac.corpus import fig2, fig3
from univjac.domain import (
    DomainConfig,
    Triple,
    canonical_rep,
    complement,
    decompositions,
    domain_list,
    graph_domain,
    in_domain,
    is_compatible_decomposition,
    pick_realizing_subset,
    universal_domain,
)
from univjac.errors import NotInDomain, NotRealized, UnstablePair
from univjac.graph import Graph, enumerate_stable_graphs, subset_stats, vine_graph

T = Triple
E = frozenset()


def _as_tuple(t):
    return (t.e, t.h, t.A)


def theta():
    return Graph.build([(0, ()), (0, ())], [(0, 1)] * 3)


def test_universal_domain_examples():
    assert universal_domain(DomainConfig(2, 0)) == {T(3, 0)}
    assert universal_domain(DomainConfig(2, 1)) == {T(2, 0, {1}), T(2, 1), T(3, 0), T(3, 0, {1})}
    pairs = {(t.e, t.h) for t in universal_domain(DomainConfig(3, 2))}
    assert pairs == {(2, 0), (3, 0), (4, 0), (2, 1), (3, 1), (2, 2)}


def test_unstable_pair_rejected():
    with pytest.raises(UnstablePair):
        DomainConfig(1, 0)
    with pytest.raises(UnstablePair):
        DomainConfig(0, 2)


@pytest.mark.parametrize("g,n,mv", [(2, 0, 2), (2, 3, 2), (3, 2, 2), (4, 1, 2), (2, 4, 1), (3, 3, 1), (5, 0, 2)])
def test_domain_matches_definition(g, n, mv):
    ours = sorted(_as_tuple(t) for t in domain_list(DomainConfig(g, n, 0, mv)))
    theirs = sorted(domain_triples(g, n, mv), key=lambda t: (t[0], t[1], sorted(t[2])))
    assert sorted(ours, key=lambda t: (t[0], t[1], sorted(t[2]))) == theirs


def test_domain_listing_is_sorted_by_key():
    dom = domain_list(DomainConfig(2, 4))
    assert [t.key for t in dom] == sorted(t.key for t in dom)


def test_complement_examples():
    assert complement(T(2, 0, {1}), DomainConfig(2, 1)) == T(2, 1)
    assert complement(T(3, 0), DomainConfig(2, 0)) == T(3, 0)
    with pytest.raises(NotInDomain):
        complement(T(2, 2, {1, 2}), DomainConfig(3, 2))


def test_canonical_rep_examples():
    cfg = DomainConfig(2, 1)
    assert canonical_rep(T(2, 1), cfg) == T(2, 0, {1})
    assert canonical_rep(T(3, 0), DomainConfig(2, 0)) == T(3, 0)


cfgs = st.sampled_from([DomainConfig(g, n) for g, n in [(2, 0), (2, 3), (2, 5), (3, 0), (3, 2), (4, 2), (5, 1), (6, 0)]])


@given(cfgs, st.data())
@settings(max_examples=500)
def test_complement_is_an_involution(cfg, data):
    t = data.draw(st.sampled_from(domain_list(cfg)))
    c = complement(t, cfg)
    assert in_domain(c, cfg)
    assert complement(c, cfg) == t
    assert _as_tuple(c) == oracle_complement(_as_tuple(t), cfg.g, cfg.n)
    if cfg.n >= 1:
        assert c != t
    else:
        assert (c == t) == (2 * t.h == cfg.g + 1 - t.e)
    r = canonical_rep(t, cfg)
    assert canonical_rep(r, cfg) == r
    assert r.key == min(t.key, c.key)


def test_compatible_decomposition_examples():
    assert is_compatible_decomposition(T(2, 1, {1, 2}), T(3, 0, {1}), T(3, 0, {2}))
    for g in (4, 5, 6):
        assert is_compatible_decomposition(T(2, 1, {1}), T(2, 1), T(2, 0, {1}))
    assert not is_compatible_decomposition(T(2, 1, {1}), T(2, 0, {1}), T(3, 0))
    assert not is_compatible_decomposition(T(2, 1, {1, 2}), T(3, 0, {1}), T(3, 0, {1, 2}))


@pytest.mark.parametrize("g,n", [(g, n) for g in range(2, 5) for n in range(0, 5) if 2 * g - 2 + n > 0])
def test_no_valence_one_triple_decomposes(g, n):
    cfg = DomainConfig(g, n, 0, 1)
    for t in domain_list(cfg):
        for t1, t2 in decompositions(t, cfg):
            assert 1 not in (t.e, t1.e, t2.e)


def test_decompositions_of_2h1_at_genus_2():
    cfg = DomainConfig(2, 3)
    t = T(2, 1, {1, 2})
    pairs = decompositions(t, cfg)
    shapes = {(t1.e, t1.h, t2.e, t2.h) for t1, t2 in pairs}
    # two valence-3 halves, or a valence-2 genus-0 half beside a valence-2 genus-1 half
    assert shapes == {(3, 0, 3, 0), (2, 0, 2, 1)}
    three = [(t1.A, t2.A) for t1, t2 in pairs if t1.e == 3]
    assert sorted(map(sorted, map(lambda p: [sorted(p[0]), sorted(p[1])], three))) == [[[], [1, 2]], [[1], [2]]]


def test_decompositions_of_4_0_at_genus_3_include_pairs_of_3_0():
    cfg = DomainConfig(3, 2)
    shapes = {(t1.e, t1.h, t2.e, t2.h) for t1, t2 in decompositions(T(4, 0, {1}), cfg)}
    assert (3, 0, 3, 0) in shapes


def test_top_valence_without_room_has_no_decomposition():
    assert decompositions(T(3, 0), DomainConfig(2, 0)) == []


@pytest.mark.parametrize("g,n", [(2, 2), (2, 4), (3, 2), (4, 1), (3, 3)])
def test_decompositions_match_definition(g, n):
    cfg = DomainConfig(g, n)
    ours = set()
    for t in domain_list(cfg):
        for t1, t2 in decompositions(t, cfg):
            ours.add((_as_tuple(t), frozenset((_as_tuple(t1), _as_tuple(t2)))))
    theirs = {(t, frozenset((a, b))) for t, a, b in oracle_decompositions(g, n)}
    assert ours == theirs


def test_decompositions_outside_domain():
    with pytest.raises(NotInDomain):
        decompositions(T(2, 0), DomainConfig(2, 2))


# per-graph domain ----------------------------------------------------------------


def test_graph_domain_vine_and_theta():
    for t in [T(3, 0, {1}), T(2, 1, {1})]:
        cfg = DomainConfig(3, 1)
        if not in_domain(t, cfg):
            continue
        v = vine_graph(t.e, t.h, t.A, 3, 1)
        assert set(graph_domain(v)) == {t, complement(t, cfg)}
    assert set(graph_domain(theta())) == {T(3, 0)}


def test_graph_domain_fig3_has_both_target_triples():
    dom = graph_domain(fig3())
    assert T(4, 0, {1}) in dom and T(2, 1, {1}) in dom


def test_pick_realizing_subset():
    v = vine_graph(3, 0, {1}, 2, 1)
    assert pick_realizing_subset(v, T(3, 0, {1})) == {0}
    assert pick_realizing_subset(theta(), T(3, 0)) == {0}
    graph = fig2()
    t = T(3, 0, {1, 2, 3})
    chosen = pick_realizing_subset(graph, t)
    fibre = sorted(
        (w for w in graph_domain(graph)[t]),
        key=lambda s: tuple(sorted(s)),
    )
    assert chosen == fibre[0]
    # independent check of the fibre: every subset with those statistics
    brute = set()
    from oracles import brute_biconnected

    for w in brute_biconnected(graph):
        s = subset_stats(graph, w)
        if (s.val, s.genus, s.markings) == (3, 0, t.A):
            brute.add(w)
    assert set(fibre) == brute
    with pytest.raises(NotRealized):
        pick_realizing_subset(v, T(2, 0, {1}))


@pytest.mark.parametrize("g,n", [(2, 1), (2, 2), (1, 3), (3, 1)])
def test_graph_domain_inclusions(g, n):
    wide = universal_domain(DomainConfig(g, n, 0, 1)) if 2 * g - 2 + n > 0 else set()
    narrow = universal_domain(DomainConfig(g, n, 0, 2))
    for graph in enumerate_stable_graphs(g, n):
        dom = set(graph_domain(graph))
        assert dom <= wide
        assert (dom <= narrow) == (not graph.separating_edges())


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_decomposition_arithmetic_on_realizing_subsets(seed):
    """If W is split into two biconnected halves, their triples decompose W's triple."""
    graphs = enumerate_stable_graphs(2, 3, trivalent_only=True)
    graph = random.Random(seed).choice(graphs)
    doms = graph_domain(graph)
    subsets = {w: t for t, ws in doms.items() for w in ws}
    for w, t in subsets.items():
        for w1, t1 in subsets.items():
            w2 = w - w1
            if not (w1 < w) or w2 not in subsets:
                continue
            t2 = subsets[w2]
            a, b, c = subset_stats(graph, w), subset_stats(graph, w1), subset_stats(graph, w2)
            k12 = (b.val + c.val - a.val) // 2
            if k12 >= 1 and b.val + c.val - a.val == 2 * k12 and min(t.e, t1.e, t2.e) >= 2:
                # internal edges of W = internal(W1) + internal(W2) + k12
                assert a.genus == b.genus + c.genus + k12 - 1
                assert is_compatible_decomposition(t, t1, t2) == (
                    a.val < b.val + c.val and b.val < a.val + c.val and c.val < a.val + b.val
                )
