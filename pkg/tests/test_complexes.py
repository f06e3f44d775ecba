import pytest

from pinwheel.complexes import (
    AFFINE, KONTSEVICH, PROJECTIVE_BASED, PSI_SIGN, AffineElement, CoverageError, GradedBasis,
    assemble_differential, d_affine, d_kontsevich, d_proj, d_proj_raw, enumerate_projective,
    filtration_level, is_based, p_operator, pinwheel_vector, plus_graph, psi, psi_chain,
    psi_inverse, reduce_to_based,
)
from pinwheel.graph import (
    INT, PROJECTIVE, Graph, GraphError, OrientedGraph, SignedCanonicalGraph, canonicalize, edge,
    ext,
)
from pinwheel.linalg import SparseVector
from pinwheel.suites import filtration_failures


def based(n, max_internal):
    b = GradedBasis(range(n), PROJECTIVE_BASED)
    return [g for m in range(max_internal + 1) for d in b.degree_range(m) for g in b.block(d, m)]


def test_small_block_sizes():
    b = GradedBasis(range(4), PROJECTIVE_BASED)
    assert [len(b.block(d, 0)) for d in range(7)] == [1, 6, 15, 20, 15, 6, 1]
    assert [len(b.block(d, 2)) for d in range(1, 9)] == [6, 39, 108, 165, 150, 81, 24, 3]


def test_based_blocks_are_based_and_sorted():
    for g in based(4, 2):
        assert is_based(g)
    b = GradedBasis(range(4), PROJECTIVE_BASED)
    keys = b.block(3, 1)
    assert keys == sorted(keys)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_d_squared_on_every_generator(n):
    for g in based(n, 2):
        assert d_proj(d_proj({g: 1})) == {}


def test_kontsevich_d_squared():
    b = GradedBasis(range(3), KONTSEVICH)
    for m in range(3):
        for d in b.degree_range(m):
            for g in b.block(d, m):
                assert d_kontsevich(d_kontsevich({g: 1})) == {}


def test_head_rule_does_not_matter():
    for g in based(4, 2):
        assert d_proj({g: 1}, head_rule="max") == d_proj({g: 1}, head_rule="min")


@pytest.mark.parametrize("n", [3, 4])
def test_pinwheel_generators_reduce_to_zero(n):
    for m in (1, 2):
        for g in enumerate_projective(range(n), m):
            sg = SignedCanonicalGraph(g, 1)
            for i in range(m):
                assert reduce_to_based(pinwheel_vector(sg, (INT, i))) == {}


def test_pinwheel_vector_needs_internal_vertex():
    g = plus_graph()
    with pytest.raises(GraphError):
        pinwheel_vector(g, ext(0))


def test_reduce_is_idempotent():
    for m in (1, 2):
        for g in enumerate_projective(range(4), m)[::7]:
            r = reduce_to_based({g: 1})
            assert reduce_to_based(r) == r
            assert all(is_based(k) for k in r)


def apply_p(terms, k):
    out = []
    for og, c in terms:
        for h, s in p_operator(og, k):
            out.append((h, c * s))
    return out


def collect(terms):
    acc = SparseVector()
    for og, c in terms:
        sc = canonicalize(og)
        if sc.sign:
            acc.add(sc.graph, c * sc.sign)
    return reduce_to_based(acc)


def test_p_operators_commute():
    for g in enumerate_projective(range(4), 2)[::3]:
        og = OrientedGraph(g.externals, 2, g.edges, g.word(PROJECTIVE), PROJECTIVE)
        first = collect(apply_p(apply_p([(og, 1)], 0), 1))
        second = collect(apply_p(apply_p([(og, 1)], 1), 0))
        assert first == second


@pytest.mark.parametrize("n", [2, 3, 4])
def test_psi_counts_and_round_trip(n):
    p = GradedBasis(range(n), PROJECTIVE_BASED)
    a = GradedBasis(range(1, n), AFFINE)
    for m in range(3):
        for d in range(-6, 12):
            assert len(p.block(d, m)) == len(a.block(d, m))
            for x in a.block(d, m):
                assert psi_inverse(psi_chain({x: 1})) == {x: 1}


def test_psi_adds_basepoint_edges():
    g = Graph((1, 2), 0, ())
    out = psi(AffineElement(g, (2,)), base=0)
    assert out.graph.edges == (edge(ext(0), ext(2)),)


def test_filtration_sign_is_pinned_down():
    total, bad = filtration_failures(4, 1)
    assert total > 0 and bad == 0
    assert filtration_failures(4, 1, -PSI_SIGN)[1] > 0


def test_filtration_levels():
    g = Graph((0, 1, 2), 0, (edge(ext(0), ext(1)), edge(ext(1), ext(2))))
    assert filtration_level(g) == 1


def test_affine_differential_keeps_eta():
    a = GradedBasis(range(1, 4), AFFINE)
    for x in a.block(1, 1):
        for y in d_affine({x: 1}):
            assert y.eta == x.eta


def test_plus_graph_differential():
    raw = d_proj_raw(plus_graph().graph)
    assert len(raw) == 12
    assert sorted(set(raw.values())) == [-1, 1]


def test_assemble_reports_missing_keys():
    b = GradedBasis(range(4), PROJECTIVE_BASED)
    src = b.block(1, 1)
    assert src
    with pytest.raises(CoverageError):
        assemble_differential(src, [], "d_proj")
    mat = assemble_differential(src, b.block(2, 0), "d_proj")
    assert mat.shape == (len(b.block(2, 0)), len(src))
