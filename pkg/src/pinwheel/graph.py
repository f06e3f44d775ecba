"""Oriented graphs with external and internal vertices.

A vertex is a pair ``(kind, value)``: ``(EXT, label)`` for an external
vertex and ``(INT, i)`` for the internal vertex with index ``i``.  Because
``EXT < INT`` every external vertex sorts before every internal one, and
an edge is stored as the sorted pair of its endpoints.

An orientation is a word in the generators of the orientation line: the
edges (affine mode) or the internal vertices and the edges (projective
mode).  Two words define the same orientation iff they differ by an even
permutation.  A :class:`Graph` in canonical form carries the implicit word
"internal vertices by index, then edges in sorted order"; a
:class:`SignedCanonicalGraph` is such a graph times ``+1``, ``-1`` or
``0`` (the zero class of a graph with an odd automorphism).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

from .exterior import permutation_sign

EXT, INT = 0, 1
AFFINE = "affine"
PROJECTIVE = "projective"
KONTSEVICH = "kontsevich"
MODES = (AFFINE, PROJECTIVE)

Vertex = tuple[int, Hashable]
Edge = tuple[Vertex, Vertex]


class GraphError(ValueError):
    """Structurally invalid graph or orientation word."""


def ext(label) -> Vertex:
    return (EXT, label)


def internal(i: int) -> Vertex:
    return (INT, i)


def edge(a: Vertex, b: Vertex) -> Edge:
    if a == b:
        raise GraphError(f"loop at {a}")
    return (a, b) if a < b else (b, a)


def is_edge_letter(letter) -> bool:
    return type(letter[0]) is tuple


@dataclass(frozen=True, order=True)
class Graph:
    """An unoriented graph; ``edges`` is a sorted tuple of sorted pairs."""

    externals: tuple
    internal_count: int
    edges: tuple

    def internal_vertices(self) -> tuple[Vertex, ...]:
        return tuple((INT, i) for i in range(self.internal_count))

    def vertices(self) -> tuple[Vertex, ...]:
        return tuple((EXT, a) for a in self.externals) + self.internal_vertices()

    def word(self, mode: str) -> tuple:
        """The canonical orientation word of this labelling."""
        if mode == PROJECTIVE:
            return self.internal_vertices() + self.edges
        return self.edges

    def incident(self, v: Vertex) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if v in e)

    def neighbours(self, v: Vertex) -> set[Vertex]:
        return {e[1] if e[0] == v else e[0] for e in self.edges if v in e}

    def valence(self, v: Vertex) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def basepoint(self):
        return min(self.externals)


@dataclass(frozen=True)
class OrientedGraph:
    """A graph with an explicit orientation word (not necessarily canonical)."""

    externals: tuple
    internal_count: int
    edges: tuple
    orientation: tuple
    mode: str = PROJECTIVE

    @classmethod
    def build(cls, externals: Iterable, internal_count: int, edges: Iterable,
              orientation: Iterable | None = None, mode: str = PROJECTIVE) -> "OrientedGraph":
        """Normalize and validate; ``orientation`` defaults to the sorted word."""
        if mode not in MODES:
            raise GraphError(f"unknown mode {mode!r}")
        xs = tuple(sorted(externals))
        if len(set(xs)) != len(xs):
            raise GraphError("repeated external label")
        es = [edge(*e) for e in edges]
        if len(set(es)) != len(es):
            raise GraphError("double edge")
        es = tuple(sorted(es))
        known = {(EXT, a) for a in xs} | {(INT, i) for i in range(internal_count)}
        for e in es:
            for v in e:
                if v not in known:
                    raise GraphError(f"edge {e} uses unknown vertex {v}")
        g = Graph(xs, internal_count, es)
        if orientation is None:
            word = g.word(mode)
        else:
            word = tuple(edge(*l) if is_edge_letter(l) else l for l in orientation)
            if len(word) != len(g.word(mode)) or set(word) != set(g.word(mode)):
                raise GraphError("orientation word must list each generator exactly once")
        return cls(xs, internal_count, es, word, mode)

    @property
    def graph(self) -> Graph:
        return Graph(self.externals, self.internal_count, self.edges)


@dataclass(frozen=True, order=True)
class SignedCanonicalGraph:
    graph: Graph
    sign: int
    mode: str = PROJECTIVE

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def oriented(self) -> OrientedGraph:
        g = self.graph
        return OrientedGraph(g.externals, g.internal_count, g.edges, g.word(self.mode), self.mode)

    def __neg__(self) -> "SignedCanonicalGraph":
        return SignedCanonicalGraph(self.graph, -self.sign, self.mode)


# -- canonical labelling -------------------------------------------------

def _vertex_invariants(externals, m, edges):
    inv = []
    for i in range(m):
        v = (INT, i)
        nb = [e[1] if e[0] == v else e[0] for e in edges if v in e]
        inv.append((len(nb), tuple(sorted(a[1] for a in nb if a[0] == EXT)),
                    sum(1 for a in nb if a[0] == INT)))
    return inv


def _candidate_maps(inv):
    """Maps old index -> new index that list internal vertices in
    increasing invariant order; all orders within a tie block."""
    blocks: dict = {}
    for i, key in enumerate(inv):
        blocks.setdefault(key, []).append(i)
    groups = [blocks[k] for k in sorted(blocks)]
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        new = [0] * len(inv)
        pos = 0
        for seq in choice:
            for old in seq:
                new[old] = pos
                pos += 1
        yield tuple(new)


def _relabel_edges(edges, new):
    def f(v):
        return (INT, new[v[1]]) if v[0] == INT else v
    return tuple(sorted(edge(f(a), f(b)) for a, b in edges))


def _map_letter(letter, new):
    def f(v):
        return (INT, new[v[1]]) if v[0] == INT else v
    if is_edge_letter(letter):
        return edge(f(letter[0]), f(letter[1]))
    return f(letter)


def _word_sign(word, canonical_word) -> int:
    pos = {l: i for i, l in enumerate(canonical_word)}
    return permutation_sign([pos[l] for l in word])


@lru_cache(maxsize=None)
def _labelling(externals, m, edges, mode):
    """Canonical edges, one minimizing relabelling, and an odd-automorphism flag."""
    if m == 0:
        return edges, (), False
    best, maps = None, []
    for new in _candidate_maps(_vertex_invariants(externals, m, edges)):
        rel = _relabel_edges(edges, new)
        if best is None or rel < best:
            best, maps = rel, [new]
        elif rel == best:
            maps.append(new)
    zero = False
    if len(maps) > 1:
        canon_word = Graph(externals, m, best).word(mode)
        ref = Graph(externals, m, edges).word(mode)
        signs = {_word_sign([_map_letter(l, new) for l in ref], canon_word) for new in maps}
        zero = len(signs) > 1
    return best, maps[0], zero


def brute_force_labelling(externals, m, edges, mode):
    """Minimization over all ``m!`` relabellings without pruning (test oracle)."""
    best, maps = None, []
    for new in itertools.permutations(range(m)):
        rel = _relabel_edges(edges, new)
        if best is None or rel < best:
            best, maps = rel, [new]
        elif rel == best:
            maps.append(new)
    canon_word = Graph(externals, m, best).word(mode)
    ref = Graph(externals, m, edges).word(mode)
    signs = {_word_sign([_map_letter(l, new) for l in ref], canon_word) for new in maps}
    return best, len(signs) > 1


def _canon(externals, m, edges, word, mode) -> SignedCanonicalGraph:
    best, new, zero = _labelling(externals, m, edges, mode)
    g = Graph(externals, m, best)
    if zero:
        return SignedCanonicalGraph(g, 0, mode)
    if m:
        word = [_map_letter(l, new) for l in word]
    return SignedCanonicalGraph(g, _word_sign(word, g.word(mode)), mode)


def canonicalize(g: OrientedGraph, mode: str | None = None) -> SignedCanonicalGraph:
    """Canonical representative of ``g`` with the sign carrying its word to
    the canonical word; sign 0 when an automorphism fixing the externals
    acts oddly on the orientation generators."""
    mode = mode or g.mode
    if mode != g.mode:
        raise GraphError(f"graph is {g.mode}, not {mode}")
    return _canon(g.externals, g.internal_count, g.edges, g.orientation, mode)


# -- primitive operations on oriented graphs -----------------------------

def _drop(word, letter):
    i = word.index(letter)
    return (-1 if i % 2 else 1), word[:i] + word[i + 1:]


def _delete(g: OrientedGraph, e: Edge) -> tuple[OrientedGraph, int]:
    e = edge(*e)
    if e not in g.edges:
        raise GraphError(f"edge {e} not in graph")
    s, word = _drop(g.orientation, e)
    edges = tuple(x for x in g.edges if x != e)
    return OrientedGraph(g.externals, g.internal_count, edges, word, g.mode), s


def _contract(g: OrientedGraph, e: Edge, head: Vertex) -> tuple[OrientedGraph, int] | None:
    e = edge(*e)
    if e not in g.edges:
        raise GraphError(f"edge {e} not in graph")
    if head not in e:
        raise GraphError(f"{head} is not an endpoint of {e}")
    if head[0] != INT:
        raise GraphError("the head of a contracted edge must be internal")
    tail = e[0] if e[1] == head else e[1]
    nb_head, nb_tail = set(), set()
    for a, b in g.edges:
        if head in (a, b):
            nb_head.add(b if a == head else a)
        if tail in (a, b):
            nb_tail.add(b if a == tail else a)
    if (nb_head & nb_tail) - {head, tail}:
        return None
    hi = head[1]

    def f(v):
        if v == head:
            v = tail
        if v[0] == INT and v[1] > hi:
            return (INT, v[1] - 1)
        return v

    sign, word = _drop(g.orientation, e)
    if g.mode == PROJECTIVE:
        s2, word = _drop(word, head)
        sign *= s2
    word = tuple(edge(f(l[0]), f(l[1])) if is_edge_letter(l) else f(l) for l in word)
    edges = tuple(sorted(edge(f(a), f(b)) for a, b in g.edges if (a, b) != e))
    return OrientedGraph(g.externals, g.internal_count - 1, edges, word, g.mode), sign


def _oslash(g: OrientedGraph, e: Edge, head: Vertex, f: Edge) -> tuple[OrientedGraph, int] | None:
    e, f = edge(*e), edge(*f)
    if e == f:
        raise GraphError("e and f must differ")
    if head not in f:
        raise GraphError(f"{f} is not incident at the head {head}")
    h, s1 = _delete(g, f)
    r = _contract(h, e, head)
    if r is None:
        return None
    return r[0], r[1] * s1


def _with_sign(g: SignedCanonicalGraph, r) -> SignedCanonicalGraph | None:
    if r is None:
        return None
    og, s = r
    c = canonicalize(og)
    return SignedCanonicalGraph(c.graph, c.sign * s * g.sign, c.mode)


def delete_edge(g: SignedCanonicalGraph, e: Edge) -> SignedCanonicalGraph:
    """Remove ``e``; the orientation loses ``e`` after moving it to the front."""
    return _with_sign(g, _delete(g.oriented(), e))


def contract_edge(g: SignedCanonicalGraph, e: Edge, head: Vertex) -> SignedCanonicalGraph | None:
    """Contract ``e`` onto its tail; ``None`` when a double edge would form."""
    return _with_sign(g, _contract(g.oriented(), e, head))


def oslash(g: SignedCanonicalGraph, e: Edge, head: Vertex, f: Edge) -> SignedCanonicalGraph | None:
    """Delete ``f`` (incident at ``head``), then contract ``e`` onto its tail."""
    return _with_sign(g, _oslash(g.oriented(), e, head, f))


def relabel_oriented(g: OrientedGraph, sigma: Mapping) -> OrientedGraph:
    if set(sigma) != set(g.externals):
        raise GraphError("relabelling must be defined on exactly the external labels")
    if len(set(sigma.values())) != len(sigma):
        raise GraphError("relabelling is not injective")

    def f(v):
        return (EXT, sigma[v[1]]) if v[0] == EXT else v

    word = tuple(edge(f(l[0]), f(l[1])) if is_edge_letter(l) else l for l in g.orientation)
    edges = tuple(sorted(edge(f(a), f(b)) for a, b in g.edges))
    return OrientedGraph(tuple(sorted(sigma.values())), g.internal_count, edges, word, g.mode)


def relabel_external(g: SignedCanonicalGraph, sigma: Mapping) -> SignedCanonicalGraph:
    """Rename external labels by the bijection ``sigma``."""
    c = canonicalize(relabel_oriented(g.oriented(), sigma))
    return SignedCanonicalGraph(c.graph, c.sign * g.sign, c.mode)


# -- admissibility -------------------------------------------------------

def components(g: Graph) -> list[set[Vertex]]:
    parent = {v: v for v in g.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in g.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps: dict = {}
    for v in parent:
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values())


def admissible(g: Graph | OrientedGraph | SignedCanonicalGraph, mode: str) -> bool:
    """Valence and component conditions.

    ``projective``: every internal vertex has valence at least 4 and no
    component with an internal vertex has fewer than two external vertices.
    ``kontsevich``: every internal vertex has valence at least 3 and every
    component contains an external vertex.
    """
    if isinstance(g, SignedCanonicalGraph):
        g = g.graph
    elif isinstance(g, OrientedGraph):
        g = g.graph
    if g.internal_count == 0:
        return True
    valence = [0] * g.internal_count
    for a, b in g.edges:
        if a[0] == INT:
            valence[a[1]] += 1
        if b[0] == INT:
            valence[b[1]] += 1
    if mode == PROJECTIVE:
        if min(valence) <= 3:
            return False
        for comp in components(g):
            n_ext = sum(1 for v in comp if v[0] == EXT)
            if n_ext <= 1 and n_ext < len(comp):
                return False
        return True
    if mode == KONTSEVICH:
        if min(valence) < 3:
            return False
        return all(any(v[0] == EXT for v in comp) for comp in components(g))
    raise GraphError(f"unknown admissibility mode {mode!r}")


# -- interchange format --------------------------------------------------

def _encode_vertex(v: Vertex):
    return v[1] if v[0] == EXT else f"i{v[1]}"


def _decode_vertex(x) -> Vertex:
    if isinstance(x, str) and x.startswith("i") and x[1:].isdigit():
        return (INT, int(x[1:]))
    return (EXT, x)


def to_record(g: SignedCanonicalGraph) -> dict:
    return {
        "external": list(g.graph.externals),
        "internal_count": g.graph.internal_count,
        "edges": [[_encode_vertex(a), _encode_vertex(b)] for a, b in g.graph.edges],
        "sign": g.sign,
        "mode": g.mode,
    }


def from_record(rec: Mapping) -> SignedCanonicalGraph:
    es = tuple(edge(_decode_vertex(a), _decode_vertex(b)) for a, b in rec["edges"])
    g = Graph(tuple(rec["external"]), int(rec["internal_count"]), es)
    if list(g.externals) != sorted(g.externals) or list(es) != sorted(es):
        raise GraphError("record is not in canonical order")
    return SignedCanonicalGraph(g, int(rec["sign"]), rec["mode"])


def dumps(g: SignedCanonicalGraph) -> str:
    return json.dumps(to_record(g), separators=(",", ":"))


def loads(text: str) -> SignedCanonicalGraph:
    return from_record(json.loads(text))
