"""Cyclic cooperad co-composition on projective graphs.

For a partition ``V = I + J`` of the external labels, a splitting sends
every internal vertex to the left or right side and every edge to a side;
an edge whose endpoints both lie on one side must go to that side.  The
left graph lives on ``I + {x}``, the right graph on ``J + {y}``; an edge with
one endpoint on the other side has that endpoint replaced by ``x`` (resp.
``y``).  Orientations split as ``Omega = Omega_L ^ Omega_R`` (up to the
shuffle sign).

Tensor chains are sparse vectors keyed by pairs ``(left, right)`` of
canonical based graphs.  Tensor signs follow the Koszul rule with the
projective degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from fractions import Fraction

from .arnold import OmegaEtaMonomial, alpha_expand, quotient_q, to_alpha
from .complexes import d_proj, projective_degree, reduce_graph
from .exterior import shuffle_sign
from .graph import (
    EXT, INT, PROJECTIVE, Graph, GraphError, OrientedGraph, SignedCanonicalGraph,
    canonicalize, edge, from_record, is_edge_letter, to_record,
)
from .linalg import SparseVector

TensorChain = SparseVector


@dataclass(frozen=True)
class Splitting:
    left_vertices: frozenset
    right_vertices: frozenset
    left_edges: frozenset
    right_edges: frozenset


def _check_partition(g: Graph, I, J) -> tuple[frozenset, frozenset]:
    I, J = frozenset(I), frozenset(J)
    if I & J or (I | J) != frozenset(g.externals):
        raise GraphError("I and J must partition the external labels")
    return I, J


def default_aux_labels(labels: Iterable) -> tuple:
    """Auxiliary labels placed after every user label."""
    top = max(labels)
    return top + 1, top + 2


def enumerate_splittings(g: Graph | SignedCanonicalGraph, I, J) -> list[Splitting]:
    """All ``(I, J)``-splittings of ``g``."""
    if isinstance(g, SignedCanonicalGraph):
        g = g.graph
    I, J = _check_partition(g, I, J)
    ext_left = {(EXT, a) for a in I}
    ext_right = {(EXT, a) for a in J}
    out = []
    for sides in itertools.product((0, 1), repeat=g.internal_count):
        left = set(ext_left) | {(INT, i) for i, s in enumerate(sides) if s == 0}
        right = set(ext_right) | {(INT, i) for i, s in enumerate(sides) if s == 1}
        forced_l, forced_r, cross = [], [], []
        for e in g.edges:
            a_left, b_left = e[0] in left, e[1] in left
            if a_left and b_left:
                forced_l.append(e)
            elif not a_left and not b_left:
                forced_r.append(e)
            else:
                cross.append(e)
        for choice in itertools.product((0, 1), repeat=len(cross)):
            el = forced_l + [e for e, c in zip(cross, choice) if c == 0]
            er = forced_r + [e for e, c in zip(cross, choice) if c == 1]
            out.append(Splitting(frozenset(left), frozenset(right), frozenset(el), frozenset(er)))
    return out


def _side_map(verts, externals, aux):
    """Vertex map onto one side, its internal count and its external labels."""
    internals = sorted(v[1] for v in verts if v[0] == INT)
    renum = {(INT, old): (INT, new) for new, old in enumerate(internals)}

    def f(v):
        if v in verts:
            return renum.get(v, v)
        return (EXT, aux)

    return f, len(internals), tuple(sorted(externals)) + (aux,)


def split_terms(g: Graph, I, J, x, y) -> list[tuple[OrientedGraph, OrientedGraph, int]]:
    """Oriented (left, right) pairs with their shuffle signs, one per splitting
    that creates no double edge at ``x`` or ``y``."""
    I, J = _check_partition(g, I, J)
    word = g.word(PROJECTIVE)
    out = []
    for sp in enumerate_splittings(g, I, J):
        fl, ml, xl = _side_map(sp.left_vertices, I, x)
        fr, mr, xr = _side_map(sp.right_vertices, J, y)
        sides, wl, wr = [], [], []
        for letter in word:
            if is_edge_letter(letter):
                if letter in sp.left_edges:
                    sides.append(0)
                    wl.append(edge(fl(letter[0]), fl(letter[1])))
                else:
                    sides.append(1)
                    wr.append(edge(fr(letter[0]), fr(letter[1])))
            elif letter in sp.left_vertices:
                sides.append(0)
                wl.append(fl(letter))
            else:
                sides.append(1)
                wr.append(fr(letter))
        el = [l for l in wl if is_edge_letter(l)]
        er = [l for l in wr if is_edge_letter(l)]
        if len(set(el)) < len(el) or len(set(er)) < len(er):
            continue
        left = OrientedGraph(tuple(sorted(xl)), ml, tuple(sorted(el)), tuple(wl), PROJECTIVE)
        right = OrientedGraph(tuple(sorted(xr)), mr, tuple(sorted(er)), tuple(wr), PROJECTIVE)
        out.append((left, right, shuffle_sign(sides)))
    return out


def _cocompose_graph(g: Graph, I, J, x, y) -> TensorChain:
    raw = SparseVector()
    for left, right, s in split_terms(g, I, J, x, y):
        cl, cr = canonicalize(left), canonicalize(right)
        if cl.sign and cr.sign:
            raw.add((cl.graph, cr.graph), s * cl.sign * cr.sign)
    out = TensorChain()
    for (a, b), c in raw.items():
        ra = reduce_graph(a)
        if not ra:
            continue
        rb = reduce_graph(b)
        for ka, ca in ra.items():
            for kb, cb in rb.items():
                out.add((ka, kb), c * ca * cb)
    return out


def cocompose(x: Mapping[Graph, object], I, J, aux: tuple | None = None) -> TensorChain:
    """Co-composition ``Proj_V -> Proj_{I+x} (x) Proj_{J+y}``, reduced on both sides."""
    out = TensorChain()
    for g, c in x.items():
        x_lab, y_lab = aux or default_aux_labels(g.externals)
        out.add_vector(_cocompose_graph(g, I, J, x_lab, y_lab), c)
    return out


def tensor_differential(t: Mapping[tuple, object]) -> TensorChain:
    """``d (x) 1 + 1 (x) d`` with the Koszul sign."""
    out = TensorChain()
    for (a, b), c in t.items():
        for ka, ca in d_proj({a: 1}).items():
            out.add((ka, b), c * ca)
        sign = -1 if projective_degree(a) % 2 else 1
        for kb, cb in d_proj({b: 1}).items():
            out.add((a, kb), sign * c * cb)
    return out


def swap(t: Mapping[tuple, object]) -> TensorChain:
    out = TensorChain()
    for (a, b), c in t.items():
        sign = -1 if (projective_degree(a) * projective_degree(b)) % 2 else 1
        out.add((b, a), sign * c)
    return out


def tensor_reduce(t: Mapping[tuple, object]) -> TensorChain:
    out = TensorChain()
    for (a, b), c in t.items():
        for ka, ca in reduce_graph(a).items():
            for kb, cb in reduce_graph(b).items():
                out.add((ka, kb), c * ca * cb)
    return out


def q_tensor(t: Mapping[tuple, object]) -> SparseVector:
    """``q (x) q`` on a tensor chain."""
    out = SparseVector()
    for (a, b), c in t.items():
        qa = quotient_q({a: 1})
        if not qa:
            continue
        qb = quotient_q({b: 1})
        for ma, ca in qa.items():
            for mb, cb in qb.items():
                out.add((ma, mb), c * ca * cb)
    return out


# -- cohomology ----------------------------------------------------------

def _generator_image(u, v, I, x, y):
    """Pullback of ``alpha(u, v)``: ``{(left word, right word): coeff}``."""
    if u in I and v in I:
        return {(((u, v),), ()): 1}
    if u not in I and v not in I:
        return {((), ((u, v),)): 1}
    if v in I:
        u, v = v, u
    return {(((u, x),), ()): 1, ((), ((y, v),)): 1}


def cocompose_cohomology(c: Mapping[OmegaEtaMonomial, object], labels: Iterable, I, J,
                         aux: tuple | None = None) -> SparseVector:
    """Co-composition on cohomology, keyed by pairs of normal monomials."""
    labels = tuple(sorted(labels))
    I, J = frozenset(I), frozenset(J)
    if I & J or (I | J) != frozenset(labels) or not I or not J:
        raise ValueError("I and J must be a partition of the labels into nonempty parts")
    x, y = aux or default_aux_labels(labels)
    left_labels = tuple(sorted(I)) + (x,)
    right_labels = tuple(sorted(J)) + (y,)
    pairs = SparseVector()
    for word, coeff in to_alpha(c, labels).items():
        acc = {((), ()): coeff}
        for u, v in word:
            nxt = SparseVector()
            for (wl, wr), a in acc.items():
                for (gl, gr), b in _generator_image(u, v, I, x, y).items():
                    # (wl (x) wr)(gl (x) gr) = (-1)^{|wr||gl|} wl gl (x) wr gr
                    sign = -1 if (len(wr) * len(gl)) % 2 else 1
                    nxt.add((wl + gl, wr + gr), sign * a * b)
            acc = nxt
        for (wl, wr), a in acc.items():
            el = alpha_expand(wl, left_labels)
            if not el:
                continue
            er = alpha_expand(wr, right_labels)
            for ml, cl in el.items():
                for mr, cr in er.items():
                    pairs.add((ml, mr), a * cl * cr)
    return pairs


# -- serialization -------------------------------------------------------

def tensor_records(t: Mapping[tuple, object]) -> list[dict]:
    out = []
    for (a, b), c in sorted(t.items()):
        out.append({"left": to_record(SignedCanonicalGraph(a, 1)),
                    "right": to_record(SignedCanonicalGraph(b, 1)),
                    "coefficient": str(c)})
    return out


def tensor_from_records(recs: Iterable[Mapping]) -> TensorChain:
    out = TensorChain()
    for r in recs:
        a, b = from_record(r["left"]), from_record(r["right"])
        out.add((a.graph, b.graph), Fraction(r["coefficient"]) * a.sign * b.sign)
    return out
