import itertools

import pytest

from pinwheel.arnold import OmegaEtaMonomial, alpha_expand, quotient_q
from pinwheel.complexes import PROJECTIVE_BASED, GradedBasis, d_proj, plus_graph
from pinwheel.cooperad import (
    cocompose, cocompose_cohomology, enumerate_splittings, q_tensor, swap, tensor_differential,
    tensor_from_records, tensor_records,
)
from pinwheel.graph import EXT, Graph, GraphError, edge, ext
from pinwheel.suites import nested_left, nested_right, relabel_tensor


def g_of(labels, edges, m=0):
    return Graph(tuple(labels), m, tuple(sorted(edge(ext(a), ext(b)) for a, b in edges)))


def brute_splitting_count(g, I):
    """Assign each internal vertex and then each cross edge a side, by brute force."""
    count = 0
    for sides in itertools.product((0, 1), repeat=g.internal_count):
        def side(v):
            return (0 if v[1] in I else 1) if v[0] == EXT else sides[v[1]]
        cross = sum(1 for a, b in g.edges if side(a) != side(b))
        count += 2 ** cross
    return count


def test_edgeless_graph_has_one_splitting():
    g = g_of((0, 1, 2), [])
    assert len(enumerate_splittings(g, {0}, {1, 2})) == 1


def test_single_cross_edge_has_two_splittings():
    g = g_of((0, 1), [(0, 1)])
    assert len(enumerate_splittings(g, {0}, {1})) == 2


def test_plus_graph_splitting_count():
    g = plus_graph().graph
    assert len(enumerate_splittings(g, {0, 1}, {2, 3})) == brute_splitting_count(g, {0, 1})


def test_splittings_need_a_partition():
    g = g_of((0, 1), [(0, 1)])
    with pytest.raises(GraphError):
        enumerate_splittings(g, {0}, {0, 1})
    with pytest.raises(GraphError):
        cocompose({g: 1}, {0}, {2})


def test_edge_inside_one_side():
    g = g_of((0, 1, 2), [(0, 1)])
    out = cocompose({g: 1}, {0, 1}, {2})
    assert out == {(g_of((0, 1, 3), [(0, 1)]), g_of((2, 4), [])): 1}


def test_cross_edge_rule():
    g = g_of((0, 1), [(0, 1)])
    out = cocompose({g: 1}, {0}, {1})
    assert out == {(g_of((0, 2), [(0, 2)]), g_of((1, 3), [])): 1,
                   (g_of((0, 2), []), g_of((1, 3), [(1, 3)])): 1}


def test_cohomology_generator_rules():
    labels = (0, 1, 2)
    a12 = alpha_expand([(1, 2)], labels)
    out = cocompose_cohomology(a12, labels, {1, 2}, {0})
    assert out == {(m, OmegaEtaMonomial()): c for m, c in alpha_expand([(1, 2)], (1, 2, 3)).items()}
    a01 = alpha_expand([(0, 1)], labels)
    out = cocompose_cohomology(a01, labels, {0, 2}, {1})
    expected = {(m, OmegaEtaMonomial()): c for m, c in alpha_expand([(0, 3)], (0, 2, 3)).items()}
    for m, c in alpha_expand([(4, 1)], (1, 4)).items():
        expected[OmegaEtaMonomial(), m] = c
    assert out == expected


def test_cohomology_needs_nonempty_sides():
    with pytest.raises(ValueError):
        cocompose_cohomology({OmegaEtaMonomial(): 1}, (0, 1), {0, 1}, set())


def based(n, top):
    b = GradedBasis(range(n), PROJECTIVE_BASED)
    return [g for m in range(top + 1) for d in b.degree_range(m) for g in b.block(d, m)]


def partitions(n):
    for r in range(1, n):
        for I in itertools.combinations(range(n), r):
            yield set(I), set(range(n)) - set(I)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chain_map_and_q_square(n):
    labels = tuple(range(n))
    for I, J in partitions(n):
        for g in based(n, 1):
            t = cocompose({g: 1}, I, J)
            assert tensor_differential(t) == cocompose(d_proj({g: 1}), I, J)
            assert q_tensor(t) == cocompose_cohomology(quotient_q({g: 1}), labels, I, J)


@pytest.mark.parametrize("n", [3, 4])
def test_cocommutative(n):
    x, y = n, n + 1
    for I, J in partitions(n):
        for g in based(n, 1)[::2]:
            flipped = relabel_tensor(swap(cocompose({g: 1}, J, I)), {x: y, y: x})
            assert flipped == cocompose({g: 1}, I, J)


def test_coassociative_small():
    n = 4
    I, J, K = {0}, {1, 2}, {3}
    for g in based(n, 1):
        aux = (4, 5, 6, 7)
        assert nested_left(g, I, J, K, aux) == nested_right(g, I, J, K, aux)


def test_plus_graph_cocomposes_to_zero():
    # any split of the star either doubles an edge at x or leaves v with valence < 4
    assert cocompose({plus_graph().graph: 1}, {0, 1}, {2, 3}) == {}


def test_tensor_records_round_trip():
    t = cocompose({g_of((0, 1, 2, 3), [(0, 2), (1, 3)]): 1}, {0, 1}, {2, 3})
    assert len(t) == 4
    assert tensor_from_records(tensor_records(t)) == t
