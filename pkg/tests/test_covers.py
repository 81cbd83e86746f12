import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from csparsify import (
    CoverMap,
    KaryPredicate,
    KUniformHypergraph,
    WeightedGraph,
    auxiliary_graph,
    biclique_colouring,
    bipartite_complement,
    bipartite_double_cover,
    complement_components,
    connected_components,
    cut,
    k_fold_cover,
    labels_from_partition,
    lift_assignment,
    nor_lift,
    partition_from_labels,
    prune_isolated,
)
from csparsify.errors import NotAPartition, NotBinary, NotBipartite, NotSingleton, NotSparsifiable
from csparsify.sparsifier import lcut_value_labels

from conftest import brute_singleton_restrictions, brute_value, random_digraph, random_sparsifiable


def undirected_pairs(g):
    return {frozenset((u, v)) for u, v, _ in g.edges}


# covers

def test_double_cover_single_edge():
    cover, m = bipartite_double_cover(WeightedGraph(2, ((0, 1, 5),)))
    assert cover.n == 4 and cover.edges == ((0, 3, 5.0),)
    assert m.forward(0, 0) == 0 and m.forward(1, 1) == 3


def test_double_cover_three_cycle():
    cover, m = bipartite_double_cover(WeightedGraph(3, ((0, 1, 1), (1, 2, 1), (2, 0, 1))))
    assert cover.n == 6
    assert undirected_pairs(cover) == {frozenset((0, 4)), frozenset((1, 5)), frozenset((2, 3))}
    # every edge crosses the layers and no two share an endpoint
    assert all(m.backward(u)[1] != m.backward(v)[1] for u, v, _ in cover.edges)
    assert max(cover.degrees()) == 1


def test_double_cover_edgeless():
    cover, _ = bipartite_double_cover(WeightedGraph(5, ()))
    assert cover.n == 10 and cover.m == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_kfold_matches_double_cover_for_k2(seed):
    g = random_digraph(random.Random(seed), 5, 8)
    h = KUniformHypergraph(g.n, 2, tuple(((u, v), w) for u, v, w in g.edges))
    hk, _ = k_fold_cover(h)
    gd, _ = bipartite_double_cover(g)
    assert [(e, w) for e, w in hk.edges] == [((u, v), w) for u, v, w in gd.edges]


def test_kfold_single_hyperedge():
    hk, m = k_fold_cover(KUniformHypergraph(3, 3, (((0, 1, 2), 1.0),)))
    assert hk.edges == (((m.forward(0, 0), m.forward(1, 1), m.forward(2, 2)), 1.0),)


def test_kfold_shared_vertex():
    h = KUniformHypergraph(4, 3, (((0, 1, 2), 1.0), ((0, 2, 3), 1.0), ((1, 0, 3), 1.0)))
    hk, m = k_fold_cover(h)
    e0, e1, e2 = (set(e) for e, _ in hk.edges)
    assert m.forward(0, 0) in e0 & e1        # vertex 0 first in both
    assert m.forward(0, 0) not in e2 and m.forward(0, 1) in e2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_cover_is_bipartite_with_same_weight(seed):
    g = random_digraph(random.Random(seed), 6, 12)
    cover, m = bipartite_double_cover(g)
    assert cover.m == g.m and cover.total_weight() == g.total_weight()
    left, right = cover.bipartition
    assert all(u in left and v in right for u, v, _ in cover.edges)


# support graph and its complement

def test_auxiliary_graph_pfig(p_fig):
    g = auxiliary_graph(p_fig)
    assert g.m == 10
    assert {(u, v - 4) for u, v, _ in g.edges} == set(p_fig.support)


def test_auxiliary_graph_small_cases():
    g = auxiliary_graph(cut(2))
    assert undirected_pairs(bipartite_complement(g)) == {frozenset((0, 2)), frozenset((1, 3))}
    empty = auxiliary_graph(KaryPredicate((2, 2), []))
    assert empty.n == 4 and empty.m == 0
    with pytest.raises(NotBinary):
        auxiliary_graph(KaryPredicate((2, 2, 2), []))


def test_complement_pfig(p_fig):
    comp = bipartite_complement(auxiliary_graph(p_fig))
    assert {(u, v - 4) for u, v, _ in comp.edges} == {(0, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 0)}


def test_complement_of_complete_bipartite():
    k22 = auxiliary_graph(KaryPredicate((2, 2), [(0, 0), (0, 1), (1, 0), (1, 1)]))
    assert bipartite_complement(k22).m == 0
    with pytest.raises(NotBipartite):
        bipartite_complement(WeightedGraph(2, ((0, 1, 1),)))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2 ** 16 - 1))
def test_complement_is_an_involution(r, s, bits):
    pred = KaryPredicate((r, s), [(x, y) for x in range(r) for y in range(s) if bits >> (x * s + y) & 1])
    g = auxiliary_graph(pred)
    twice = bipartite_complement(bipartite_complement(g))
    assert undirected_pairs(twice) == undirected_pairs(g)
    assert g.m + bipartite_complement(g).m == r * s


# colouring

def test_colouring_pfig(p_fig):
    assert complement_components(p_fig) == [([0], [1]), ([1, 2], [2, 3]), ([3], [0])]
    col = biclique_colouring(p_fig)
    assert col.colour_count == 3
    assert col.left_colours == (0, 1, 1, 2)
    assert col.right_colours == (2, 0, 1, 1)
    assert col.satisfies(p_fig)


def test_colouring_cut():
    col = biclique_colouring(cut(2))
    assert col.colour_count == 2 and col.left_colours == (0, 1) and col.right_colours == (0, 1)


def test_colouring_full_support():
    col = biclique_colouring(KaryPredicate((2, 2), [(0, 0), (0, 1), (1, 0), (1, 1)]))
    assert col.colour_count == 4
    assert len(set(col.left_colours + col.right_colours)) == 4


def test_colouring_refuses_singleton():
    with pytest.raises(NotSparsifiable):
        biclique_colouring(KaryPredicate((2, 2), [(0, 1)]))


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2 ** 16 - 1))
def test_colouring_exists_iff_no_singleton(r, s, bits):
    pred = KaryPredicate((r, s), [(x, y) for x in range(r) for y in range(s) if bits >> (x * s + y) & 1])
    if brute_singleton_restrictions(pred.support, r, s):
        with pytest.raises(NotSparsifiable):
            biclique_colouring(pred)
    else:
        col = biclique_colouring(pred)
        assert col.satisfies(pred)
        assert col.colour_count == len(complement_components(pred))
        # components of the complement are complete bipartite
        for ls, rs in complement_components(pred):
            assert all((i, j) not in pred.support for i in ls for j in rs)


# lifting

def test_lift_examples(p_fig):
    col = biclique_colouring(p_fig)
    m = CoverMap(2)
    lifted = lift_assignment((0, 1), col, m)
    assert lifted[m.forward(0, 0)] == 0 and lifted[m.forward(1, 1)] == 0
    lifted = lift_assignment((3, 2), col, m)
    assert lifted[m.forward(0, 0)] == 2 and lifted[m.forward(1, 1)] == 1


def test_lift_cut_is_identity():
    col = biclique_colouring(cut(2))
    m = CoverMap(4)
    for a in itertools.product((0, 1), repeat=4):
        lifted = lift_assignment(a, col, m)
        assert lifted[:4] == list(a) and lifted[4:] == list(a)


def test_lift_multisorted_marks_missing_colours():
    pred = KaryPredicate((2, 3), [(0, 1), (0, 2), (1, 0), (1, 2)])
    col = biclique_colouring(pred)
    lifted = lift_assignment((2, 1), col, CoverMap(2))
    assert lifted[0] is None            # label 2 has no left colour
    assert lifted[2] is not None and lifted[3] is not None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_lift_preserves_value(seed):
    rng = random.Random(seed)
    r = rng.randint(2, 3)
    pred = random_sparsifiable(rng, r, r)
    n = rng.randint(2, 4)
    g = random_digraph(rng, n, rng.randint(1, n * (n - 1)))
    col = biclique_colouring(pred)
    cover, m = bipartite_double_cover(g)
    cons = [((u, v), w) for u, v, w in g.edges]
    for a in itertools.product(range(r), repeat=n):
        assert brute_value(cons, pred.support, a) == lcut_value_labels(cover, lift_assignment(a, col, m))


# pruning

def test_prune_examples():
    cover, _ = bipartite_double_cover(WeightedGraph(2, ((0, 1, 1),)))
    tau, kept = prune_isolated(cover)
    assert tau.n == 2 and kept == [0, 3]
    cover, _ = bipartite_double_cover(WeightedGraph(3, ((0, 1, 1), (1, 2, 1), (2, 0, 1))))
    tau, kept = prune_isolated(cover)
    assert tau.n == 6 and kept == list(range(6))
    tau, kept = prune_isolated(WeightedGraph(4, ()))
    assert tau.n == 0 and kept == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_prune_keeps_edges_and_weights(seed):
    g = random_digraph(random.Random(seed), 6, 5)
    cover, _ = bipartite_double_cover(g)
    tau, kept = prune_isolated(cover)
    assert min(tau.degrees(), default=1) >= 1
    assert [(kept[u], kept[v], w) for u, v, w in tau.edges] == list(cover.edges)


# partitions and the nOR lift

def test_partition_helpers():
    parts = partition_from_labels([0, 1, 1, 0], 2)
    assert parts == [{0, 3}, {1, 2}]
    assert labels_from_partition(parts, 4) == [0, 1, 1, 0]
    with pytest.raises(NotAPartition):
        labels_from_partition([{0}, {0, 1}], 2)
    with pytest.raises(NotAPartition):
        labels_from_partition([{0}], 2)
    with pytest.raises(NotAPartition):
        partition_from_labels([0, 2], 2)


def test_nor_lift_shift_boolean():
    pred = KaryPredicate((2, 2), [(1, 0)])
    m = CoverMap(3, 2)
    parts = [{0}, {1, 2}]
    lifted = nor_lift(parts, pred, m)
    f = m.forward
    assert lifted[0] == {f(v, 0) for v in parts[1]} | {f(v, 1) for v in parts[0]}
    assert lifted[1] == {f(v, 0) for v in parts[0]} | {f(v, 1) for v in parts[1]}


def test_nor_lift_zero_shift_is_layer_copy():
    pred = KaryPredicate((3, 3, 3), [(0, 0, 0)])
    m = CoverMap(2, 3)
    parts = [{1}, set(), {0}]
    lifted = nor_lift(parts, pred, m)
    assert lifted == [{m.forward(v, i) for i in range(3) for v in p} for p in parts]


def test_nor_lift_shift_ternary():
    pred = KaryPredicate((3, 3), [(2, 1)])
    m = CoverMap(3, 2)
    parts = [{0}, {1}, {2}]
    assert nor_lift(parts, pred, m)[0] == {m.forward(1, 0), m.forward(2, 1)}


def test_nor_lift_requires_singleton():
    with pytest.raises(NotSingleton):
        nor_lift([{0}, {1}], cut(2), CoverMap(2))


def test_connected_components_order():
    g = WeightedGraph(5, ((3, 1, 1), (4, 0, 1)), directed=False)
    assert connected_components(g) == [[0, 4], [1, 3], [2]]
