"""Kontsevich, affine and projective graph complexes.

Projective chains are always stored in *based* normal form: every internal
vertex is joined to the basepoint (the smallest external label).  Any
projective graph is rewritten into this form with the pinwheel relation,
one internal vertex at a time; see :func:`reduce_to_based`.

Chains are :class:`~pinwheel.linalg.SparseVector` objects keyed by
canonical :class:`~pinwheel.graph.Graph` values (projective and Kontsevich
complexes) or by :class:`AffineElement` values (affine complex).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .graph import (
    AFFINE, EXT, INT, KONTSEVICH, PROJECTIVE,
    Graph, GraphError, OrientedGraph, SignedCanonicalGraph,
    _canon, _contract, _delete, _oslash, admissible, canonicalize, delete_edge,
    edge, relabel_oriented,
)
from .linalg import ContractViolation, SparseMatrix, SparseVector

PROJECTIVE_BASED = "projective-based"

# d_proj(psi(x)) = PSI_SIGN * psi(d_affine(x)) up to terms of strictly higher
# filtration level; the sign is fixed by computation (see filtration tests).
PSI_SIGN = -1

ChainElement = SparseVector


class CoverageError(ValueError):
    """A differential produced a key missing from the destination basis."""


@dataclass(frozen=True, order=True)
class AffineElement:
    """A Kontsevich graph (canonical affine orientation) times the
    exterior monomial ``eta_{i_1} ... eta_{i_k}`` with increasing indices."""

    graph: Graph
    eta: tuple = ()

    @property
    def degree(self) -> int:
        return len(self.graph.edges) - 2 * self.graph.internal_count + len(self.eta)


def projective_degree(g: Graph) -> int:
    return len(g.edges) - 3 * g.internal_count


def kontsevich_degree(g: Graph) -> int:
    return len(g.edges) - 2 * g.internal_count


def is_based(g: Graph) -> bool:
    u0 = (EXT, g.basepoint)
    nb = {b if a == u0 else a for a, b in g.edges if u0 in (a, b)}
    return all((INT, i) in nb for i in range(g.internal_count))


def filtration_level(g: Graph) -> int:
    """Number of edges from the basepoint to other external vertices."""
    u0 = (EXT, g.basepoint)
    return sum(1 for a, b in g.edges if a == u0 and b[0] == EXT)


# -- enumeration ---------------------------------------------------------

def enumerate_basis(labels: Iterable, m: int, edge_count: int, mode: str) -> list[Graph]:
    """All admissible nonzero canonical graphs with ``m`` internal vertices
    and ``edge_count`` edges, sorted.

    ``mode`` is ``"projective-based"`` (projective admissibility, every
    internal vertex adjacent to the basepoint) or ``"kontsevich"``.
    """
    xs = tuple(sorted(labels))
    verts = [(EXT, a) for a in xs] + [(INT, i) for i in range(m)]
    all_edges = [edge(a, b) for a, b in itertools.combinations(verts, 2)]
    if mode == PROJECTIVE_BASED:
        if not xs:
            return []
        u0 = (EXT, xs[0])
        forced = [edge(u0, (INT, i)) for i in range(m)]
        rest = [e for e in all_edges if e not in forced]
        orient, adm = PROJECTIVE, PROJECTIVE
    elif mode == KONTSEVICH:
        forced, rest = [], all_edges
        orient, adm = AFFINE, KONTSEVICH
    else:
        raise GraphError(f"unknown basis mode {mode!r}")
    k = edge_count - len(forced)
    if k < 0 or k > len(rest):
        return []
    found = set()
    for extra in itertools.combinations(rest, k):
        es = tuple(sorted(forced + list(extra)))
        g = Graph(xs, m, es)
        if not admissible(g, adm):
            continue
        c = _canon(xs, m, es, g.word(orient), orient)
        if c.sign:
            found.add(c.graph)
    return sorted(found)


def enumerate_projective(labels: Iterable, m: int) -> list[Graph]:
    """Every nonzero canonical projective graph with ``m`` internal vertices,
    admissible or not, sorted."""
    xs = tuple(sorted(labels))
    verts = [(EXT, a) for a in xs] + [(INT, i) for i in range(m)]
    all_edges = [edge(a, b) for a, b in itertools.combinations(verts, 2)]
    found = set()
    for k in range(len(all_edges) + 1):
        for es in itertools.combinations(all_edges, k):
            g = Graph(xs, m, es)
            c = _canon(xs, m, es, g.word(PROJECTIVE), PROJECTIVE)
            if c.sign:
                found.add(c.graph)
    return sorted(found)


def plus_graph(labels: Sequence = (0, 1, 2, 3)) -> SignedCanonicalGraph:
    """One internal vertex joined to each of four external vertices."""
    if len(labels) != 4:
        raise GraphError("the plus graph has four external vertices")
    v = (INT, 0)
    og = OrientedGraph.build(list(labels), 1, [((EXT, a), v) for a in labels])
    return canonicalize(og)


def enumerate_affine(labels: Iterable, m: int, degree: int) -> list[AffineElement]:
    """Affine basis elements (Kontsevich graph times eta monomial) of a degree."""
    xs = tuple(sorted(labels))
    out = []
    for k in range(len(xs) + 1):
        n_edges = degree + 2 * m - k
        if n_edges < 0:
            continue
        graphs = enumerate_basis(xs, m, n_edges, KONTSEVICH)
        for eta in itertools.combinations(xs, k):
            out.extend(AffineElement(g, eta) for g in graphs)
    return sorted(out)


class GradedBasis:
    """Bases of a complex, enumerated lazily per (degree, internal count).

    ``mode`` is ``"projective-based"``, ``"kontsevich"`` or ``"affine"``.
    An optional :class:`~pinwheel.cache.BasisCache` persists blocks.
    """

    def __init__(self, labels: Iterable, mode: str, cache=None):
        self.labels = tuple(sorted(labels))
        self.mode = mode
        self.cache = cache
        self._blocks: dict[tuple[int, int], list] = {}

    def block(self, degree: int, m: int) -> list:
        key = (degree, m)
        if key not in self._blocks:
            keys = None
            if self.cache is not None:
                keys = self.cache.load(self.labels, self.mode, degree, m)
            if keys is None:
                keys = self._enumerate(degree, m)
                if self.cache is not None:
                    self.cache.store(self.labels, self.mode, degree, m, keys)
            self._blocks[key] = keys
        return self._blocks[key]

    def _enumerate(self, degree: int, m: int) -> list:
        if self.mode == PROJECTIVE_BASED:
            return enumerate_basis(self.labels, m, degree + 3 * m, self.mode)
        if self.mode == KONTSEVICH:
            return enumerate_basis(self.labels, m, degree + 2 * m, self.mode)
        if self.mode == AFFINE:
            return enumerate_affine(self.labels, m, degree)
        raise GraphError(f"unknown basis mode {self.mode!r}")

    def degree_range(self, m: int) -> range:
        """Degrees in which graphs with ``m`` internal vertices can occur."""
        n = len(self.labels)
        max_edges = (n + m) * (n + m - 1) // 2
        if self.mode == PROJECTIVE_BASED:
            return range(-3 * m, max_edges - 3 * m + 1)
        if self.mode == KONTSEVICH:
            return range(-2 * m, max_edges - 2 * m + 1)
        return range(-2 * m, max_edges - 2 * m + n + 1)

    def blocks(self, max_internal: int) -> dict[tuple[int, int], list]:
        out = {}
        for m in range(max_internal + 1):
            for d in self.degree_range(m):
                keys = self.block(d, m)
                if keys:
                    out[d, m] = keys
        return out


# -- pinwheel reduction --------------------------------------------------

def q_operator(g: OrientedGraph, k: int) -> tuple[OrientedGraph, int] | None:
    """Add the edge from internal vertex ``k`` to the basepoint, in front
    of the word; ``None`` if that edge is already present."""
    h = edge((EXT, min(g.externals)), (INT, k))
    if h in g.edges:
        return None
    return OrientedGraph(g.externals, g.internal_count, tuple(sorted(g.edges + (h,))),
                         (h,) + g.orientation, g.mode), 1


def p_operator(g: OrientedGraph, k: int) -> list[tuple[OrientedGraph, int]]:
    """Pinwheel rewrite at internal vertex ``k`` (identity if ``k`` is based)."""
    q = q_operator(g, k)
    if q is None:
        return [(g, 1)]
    qg, _ = q
    out = []
    for e in g.edges:
        if (INT, k) in e:
            h, s = _delete(qg, e)
            out.append((h, -s))
    return out


def _first_unbased(g: Graph) -> int | None:
    u0 = (EXT, g.basepoint)
    based = {b[1] for a, b in g.edges if a == u0 and b[0] == INT}
    for i in range(g.internal_count):
        if i not in based:
            return i
    return None


@lru_cache(maxsize=None)
def _reduce_graph(g: Graph) -> tuple[tuple[Graph, int], ...]:
    if not admissible(g, PROJECTIVE):
        return ()
    k = _first_unbased(g)
    if k is None:
        return ((g, 1),)
    acc = SparseVector()
    og = OrientedGraph(g.externals, g.internal_count, g.edges, g.word(PROJECTIVE), PROJECTIVE)
    for h, s in p_operator(og, k):
        c = canonicalize(h)
        if c.sign and admissible(c.graph, PROJECTIVE):
            for key, coeff in _reduce_graph(c.graph):
                acc.add(key, s * c.sign * coeff)
    return tuple(sorted(acc.items()))


def reduce_graph(g: Graph) -> SparseVector:
    return SparseVector(_reduce_graph(g))


def reduce_to_based(x: Mapping[Graph, object]) -> SparseVector:
    """Based normal form of a projective chain; non-admissible keys vanish."""
    out = SparseVector()
    for g, c in x.items():
        for key, coeff in _reduce_graph(g):
            out.add(key, c * coeff)
    return out


def chain_of(*terms: SignedCanonicalGraph) -> SparseVector:
    out = SparseVector()
    for t in terms:
        if t is not None and t.sign:
            out.add(t.graph, t.sign)
    return out


def pinwheel_vector(g: SignedCanonicalGraph, v) -> SparseVector:
    """Sum of ``g`` minus ``e`` over the edges ``e`` at internal vertex ``v``."""
    if v[0] != INT or not 0 <= v[1] < g.graph.internal_count:
        raise GraphError(f"{v} is not an internal vertex")
    return chain_of(*(delete_edge(g, e) for e in g.graph.incident(v)))


# -- psi -----------------------------------------------------------------

def psi_oriented(x: AffineElement, base=0) -> OrientedGraph:
    g = x.graph
    if base in g.externals or any(base > a for a in g.externals):
        raise ContractViolation("the new external vertex must precede all labels")
    u0 = (EXT, base)
    hs = tuple(edge(u0, (EXT, i)) for i in x.eta)
    hv = tuple(edge(u0, (INT, v)) for v in range(g.internal_count))
    word = g.edges + hs
    for v in range(g.internal_count):
        word += (hv[v], (INT, v))
    return OrientedGraph((base,) + g.externals, g.internal_count,
                         tuple(sorted(g.edges + hs + hv)), word, PROJECTIVE)


def psi(x: AffineElement, base=0) -> SignedCanonicalGraph:
    """Add the external vertex ``base`` joined to each eta index and to
    every internal vertex."""
    return canonicalize(psi_oriented(x, base))


def psi_chain(x: Mapping[AffineElement, object], base=0) -> SparseVector:
    out = SparseVector()
    for a, c in x.items():
        p = psi(a, base)
        if p.sign:
            out.add(p.graph, c * p.sign)
    return out


def psi_preimage(g: Graph) -> tuple[AffineElement, int]:
    """The affine element ``x`` and sign ``s`` with ``g = s * psi(x)``."""
    if not is_based(g):
        raise ContractViolation(f"graph is not based: {g}")
    u0 = (EXT, g.basepoint)
    xs = tuple(a for a in g.externals if a != g.basepoint)
    eta = tuple(sorted(b[1] for a, b in g.edges if a == u0 and b[0] == EXT))
    es = tuple(e for e in g.edges if u0 not in e)
    k = canonicalize(OrientedGraph(xs, g.internal_count, es, es, AFFINE))
    x = AffineElement(k.graph, eta)
    p = psi(x, g.basepoint)
    if p.graph != g or not p.sign:
        raise ContractViolation(f"graph is not in the image of psi: {g}")
    return x, p.sign


def psi_inverse(x: Mapping[Graph, object]) -> SparseVector:
    out = SparseVector()
    for g, c in x.items():
        a, s = psi_preimage(g)
        out.add(a, c * s)
    return out


# -- differentials -------------------------------------------------------

def _internal_head(e, rule: str):
    a, b = e
    if a[0] == INT and b[0] == INT:
        return max(a, b) if rule == "max" else min(a, b)
    return a if a[0] == INT else b


@lru_cache(maxsize=None)
def _d_kontsevich_graph(g: Graph) -> tuple[tuple[Graph, int], ...]:
    og = OrientedGraph(g.externals, g.internal_count, g.edges, g.edges, AFFINE)
    acc = SparseVector()
    for e in g.edges:
        if e[0][0] == EXT and e[1][0] == EXT:
            continue
        r = _contract(og, e, _internal_head(e, "max"))
        if r is None:
            continue
        c = canonicalize(r[0])
        if c.sign and admissible(c.graph, KONTSEVICH):
            acc.add(c.graph, c.sign * r[1])
    return tuple(sorted(acc.items()))


def d_kontsevich(x: Mapping[Graph, object]) -> SparseVector:
    """Sum of all defined contractions of boundary and internal edges."""
    out = SparseVector()
    for g, c in x.items():
        for key, coeff in _d_kontsevich_graph(g):
            out.add(key, c * coeff)
    return out


def d_affine(x: Mapping[AffineElement, object]) -> SparseVector:
    """The Kontsevich differential on the graph factor; eta factors are closed."""
    out = SparseVector()
    for a, c in x.items():
        for key, coeff in _d_kontsevich_graph(a.graph):
            out.add(AffineElement(key, a.eta), c * coeff)
    return out


def d_proj_raw(g: Graph, head_rule: str = "max") -> SparseVector:
    """Unreduced sum of ``g oslash (e, f)`` for one graph (canonical word).

    Boundary edges have their head at the internal end; internal edges are
    headed at the larger (``"max"``) or smaller (``"min"``) index.
    """
    og = OrientedGraph(g.externals, g.internal_count, g.edges, g.word(PROJECTIVE), PROJECTIVE)
    acc = SparseVector()
    for e in g.edges:
        if e[0][0] == EXT and e[1][0] == EXT:
            continue
        head = _internal_head(e, head_rule)
        for f in g.edges:
            if f == e or head not in f:
                continue
            r = _oslash(og, e, head, f)
            if r is None:
                continue
            c = canonicalize(r[0])
            if c.sign:
                acc.add(c.graph, c.sign * r[1])
    return acc


@lru_cache(maxsize=None)
def _d_proj_graph(g: Graph, head_rule: str) -> tuple[tuple[Graph, int], ...]:
    return tuple(sorted(reduce_to_based(d_proj_raw(g, head_rule)).items()))


def d_proj(x: Mapping[Graph, object], head_rule: str = "max") -> SparseVector:
    """Projective differential followed by reduction to based form."""
    out = SparseVector()
    for g, c in reduce_to_based(x).items():
        for key, coeff in _d_proj_graph(g, head_rule):
            out.add(key, c * coeff)
    return out


# -- products and relabelling --------------------------------------------

def _shift(v, offset):
    return (INT, v[1] + offset) if v[0] == INT else v


def glue_graphs(a: Graph, b: Graph, mode: str) -> SignedCanonicalGraph | None:
    """Union along the external vertices with concatenated orientation words;
    ``None`` if a double edge appears."""
    if a.externals != b.externals:
        raise ContractViolation("factors have different external sets")
    off = a.internal_count
    b_edges = tuple(edge(_shift(u, off), _shift(v, off)) for u, v in b.edges)
    if set(a.edges) & set(b_edges):
        return None
    b_word = tuple(edge(_shift(l[0], off), _shift(l[1], off)) if type(l[0]) is tuple
                   else _shift(l, off) for l in b.word(mode))
    og = OrientedGraph(a.externals, off + b.internal_count, tuple(sorted(a.edges + b_edges)),
                       a.word(mode) + b_word, mode)
    return canonicalize(og)


def glue_product(x: Mapping[Graph, object], y: Mapping[Graph, object],
                 mode: str = PROJECTIVE) -> SparseVector:
    """Bilinear gluing product; projective results are reduced to based form."""
    out = SparseVector()
    for a, ca in x.items():
        for b, cb in y.items():
            c = glue_graphs(a, b, mode)
            if c is not None and c.sign:
                out.add(c.graph, ca * cb * c.sign)
    if mode == PROJECTIVE:
        return reduce_to_based(out)
    return SparseVector({k: c for k, c in out.items() if admissible(k, KONTSEVICH)})


def relabel_chain(x: Mapping[Graph, object], sigma: Mapping, mode: str = PROJECTIVE) -> SparseVector:
    out = SparseVector()
    for g, c in x.items():
        og = OrientedGraph(g.externals, g.internal_count, g.edges, g.word(mode), mode)
        r = canonicalize(relabel_oriented(og, sigma))
        if r.sign:
            out.add(r.graph, c * r.sign)
    return out


# -- matrices ------------------------------------------------------------

def assemble_differential(src: Sequence, dst: Sequence, which: str) -> SparseMatrix:
    """Matrix (rows ``dst``, columns ``src``) of ``d_proj``, ``d_kontsevich``
    or ``d_affine``."""
    fn = {"d_proj": d_proj, "d_kontsevich": d_kontsevich, "d_affine": d_affine}[which]
    mat = SparseMatrix(dst, src)
    for key in src:
        image = fn({key: 1})
        missing = [k for k in image if k not in mat.row_index]
        if missing:
            raise CoverageError(f"{which} of {key} leaves the destination basis: {missing[0]}")
        mat.set_column(key, image)
    return mat
