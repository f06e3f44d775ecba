import itertools
import random

import pytest

from pinwheel.graph import (
    AFFINE, INT, KONTSEVICH, PROJECTIVE, Graph, GraphError, OrientedGraph,
    SignedCanonicalGraph, admissible, brute_force_labelling, canonicalize, contract_edge,
    delete_edge, dumps, edge, ext, internal, loads, oslash, relabel_external, relabel_oriented,
)


def random_oriented(rng, n, m, mode, p=0.5):
    verts = [ext(a) for a in range(n)] + [internal(i) for i in range(m)]
    es = [edge(a, b) for a, b in itertools.combinations(verts, 2) if rng.random() < p]
    g = Graph(tuple(range(n)), m, tuple(sorted(es)))
    word = list(g.word(mode))
    rng.shuffle(word)
    return OrientedGraph(g.externals, m, g.edges, tuple(word), mode)


def shuffle_internal(og, perm):
    def f(v):
        return (INT, perm[v[1]]) if v[0] == INT else v
    word = tuple(edge(f(l[0]), f(l[1])) if type(l[0]) is tuple else f(l) for l in og.orientation)
    es = tuple(sorted(edge(f(a), f(b)) for a, b in og.edges))
    return OrientedGraph(og.externals, og.internal_count, es, word, og.mode)


@pytest.mark.parametrize("mode", [AFFINE, PROJECTIVE])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_canonical_form_matches_brute_force(mode, m):
    rng = random.Random(m)
    for _ in range(40):
        og = random_oriented(rng, 3, m, mode)
        c = canonicalize(og)
        best, zero = brute_force_labelling(og.externals, m, og.edges, mode)
        # same isomorphism class as the input, same vanishing verdict
        assert brute_force_labelling(og.externals, m, c.graph.edges, mode)[0] == best
        assert (c.sign == 0) == zero


@pytest.mark.parametrize("mode", [AFFINE, PROJECTIVE])
def test_canonical_form_is_labelling_invariant(mode):
    rng = random.Random(11)
    for _ in range(60):
        m = rng.randint(1, 4)
        og = random_oriented(rng, 3, m, mode)
        perm = list(range(m))
        rng.shuffle(perm)
        a, b = canonicalize(og), canonicalize(shuffle_internal(og, perm))
        assert a.graph == b.graph and a.sign == b.sign


def test_odd_automorphism_gives_zero():
    # two internal vertices joined to the same two externals, no edge between them:
    # swapping them exchanges two pairs of edges (even) and two vertex letters (odd)
    es = [(ext(0), internal(0)), (ext(1), internal(0)), (ext(0), internal(1)), (ext(1), internal(1))]
    assert canonicalize(OrientedGraph.build([0, 1], 2, es, mode=PROJECTIVE)).sign == 0
    assert canonicalize(OrientedGraph.build([0, 1], 2, es, mode=AFFINE)).sign != 0


def test_reversing_orientation_negates():
    og = OrientedGraph.build([0, 1, 2], 0, [(ext(0), ext(1)), (ext(1), ext(2))], mode=AFFINE)
    rev = OrientedGraph.build([0, 1, 2], 0, og.edges, og.orientation[::-1], mode=AFFINE)
    assert canonicalize(og).sign == -canonicalize(rev).sign


def test_build_validates():
    with pytest.raises(GraphError):
        edge(ext(0), ext(0))
    with pytest.raises(GraphError):
        OrientedGraph.build([0, 1], 0, [(ext(0), ext(1)), (ext(1), ext(0))])
    with pytest.raises(GraphError):
        OrientedGraph.build([0, 1], 0, [(ext(0), ext(5))])
    with pytest.raises(GraphError):
        OrientedGraph.build([0, 1], 0, [(ext(0), ext(1))], orientation=[])


def test_delete_edge_sign():
    a, b = edge(ext(0), ext(1)), edge(ext(1), ext(2))
    g = SignedCanonicalGraph(Graph((0, 1, 2), 0, (a, b)), 1, AFFINE)
    assert delete_edge(g, a).sign == 1
    assert delete_edge(g, b).sign == -1
    with pytest.raises(GraphError):
        delete_edge(g, edge(ext(0), ext(2)))


def test_contract_edge_projective_and_double_edge():
    v = internal(0)
    es = [(ext(0), v), (ext(1), v), (ext(2), v), (ext(0), ext(1))]
    g = canonicalize(OrientedGraph.build([0, 1, 2], 1, es))
    # 0 and v share the neighbour 1, so contracting {0, v} doubles the edge 0-1
    assert contract_edge(g, edge(ext(0), v), v) is None
    assert contract_edge(g, edge(ext(2), v), v) is not None
    es = [(ext(0), v), (ext(1), v), (ext(2), v)]
    g = canonicalize(OrientedGraph.build([0, 1, 2], 1, es))
    c = contract_edge(g, edge(ext(0), v), v)
    assert c.graph.internal_count == 0 and len(c.graph.edges) == 2
    with pytest.raises(GraphError):
        contract_edge(g, edge(ext(0), v), ext(0))


def test_oslash_requires_incidence():
    v = internal(0)
    es = [(ext(a), v) for a in range(4)]
    g = canonicalize(OrientedGraph.build([0, 1, 2, 3], 1, es))
    r = oslash(g, edge(ext(0), v), v, edge(ext(1), v))
    assert r.graph.internal_count == 0 and len(r.graph.edges) == 2
    with pytest.raises(GraphError):
        oslash(g, edge(ext(0), v), v, edge(ext(0), v))


def test_relabel_round_trip():
    rng = random.Random(5)
    for _ in range(30):
        og = random_oriented(rng, 4, 2, PROJECTIVE)
        c = canonicalize(og)
        sigma = dict(zip(range(4), [2, 0, 3, 1]))
        inv = {v: k for k, v in sigma.items()}
        back = relabel_external(relabel_external(c, sigma), inv)
        assert back == c
    with pytest.raises(GraphError):
        relabel_oriented(og, {0: 1})


def test_admissibility():
    v = internal(0)
    tri = Graph((0, 1, 2), 1, tuple(sorted(edge(ext(a), v) for a in range(3))))
    plus = Graph((0, 1, 2, 3), 1, tuple(sorted(edge(ext(a), v) for a in range(4))))
    assert admissible(tri, KONTSEVICH) and not admissible(tri, PROJECTIVE)
    assert admissible(plus, PROJECTIVE)
    # an internal component hanging off a single external vertex
    w = internal(1)
    lonely = Graph((0, 1), 2, tuple(sorted([edge(ext(0), v), edge(v, w)])))
    assert not admissible(lonely, PROJECTIVE)
    floating = Graph((0,), 1, ())
    assert not admissible(floating, KONTSEVICH)


def test_record_round_trip():
    v = internal(0)
    g = canonicalize(OrientedGraph.build([0, 1, 2, 3], 1, [(ext(a), v) for a in range(4)]))
    text = dumps(g)
    assert '"i0"' in text
    assert loads(text) == g
    with pytest.raises(GraphError):
        loads('{"external":[1,0],"internal_count":0,"edges":[],"sign":1,"mode":"affine"}')
