"""Identities among one-forms on a boundary stratum where two points collide.

On the stratum where ``u`` and ``v`` come together, ``alpha(u, w) - alpha(v, w)``
does not depend on ``w``.  Elements live in the exterior algebra on the
symbols ``alpha(p, q)`` (unordered pairs, stored as sorted tuples); imposing
the boundary means rewriting every ``alpha(u, w)`` with ``w`` other than a
fixed reference vertex ``w0`` as ``alpha(u, w0) - alpha(v, w0) + alpha(v, w)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exterior import normalize, wedge
from .linalg import SparseVector

BoundaryAlgebraElement = SparseVector


def alpha(p, q) -> tuple:
    if p == q:
        raise ValueError("alpha needs two distinct vertices")
    return (min(p, q), max(p, q))


def monomial(*letters: tuple, coeff=1) -> BoundaryAlgebraElement:
    """A single word in alpha symbols, normalized."""
    return normalize({tuple(letters): coeff})


def linear(terms: Mapping[tuple, object]) -> BoundaryAlgebraElement:
    """A degree-one element from ``{alpha pair: coefficient}``."""
    return BoundaryAlgebraElement({(k,): c for k, c in terms.items() if c})


def multiply(*factors: Mapping[tuple, object]) -> BoundaryAlgebraElement:
    out = BoundaryAlgebraElement({(): 1})
    for f in factors:
        out = wedge(out, f)
    return out


def reference_vertex(vertices: Iterable, u, v):
    rest = sorted(set(vertices) - {u, v})
    if len(rest) < 1 or u == v:
        raise ValueError("need at least three distinct vertices including u and v")
    return rest[0]


def impose_boundary(x: Mapping[tuple, object], u, v, vertices: Iterable) -> BoundaryAlgebraElement:
    """Normal form of ``x`` modulo the linear relations of the ``(u, v)`` stratum."""
    vertices = set(vertices)
    if u not in vertices or v not in vertices:
        raise ValueError(f"{u} and {v} must both be vertices")
    w0 = reference_vertex(vertices, u, v)
    subs = {}
    for w in vertices - {u, v, w0}:
        subs[alpha(u, w)] = {(alpha(u, w0),): 1, (alpha(v, w0),): -1, (alpha(v, w),): 1}
    out = BoundaryAlgebraElement()
    for word, c in x.items():
        acc = BoundaryAlgebraElement({(): c})
        for letter in word:
            acc = wedge(acc, subs.get(letter, {(letter,): 1}))
            if not acc:
                break
        out.add_vector(acc)
    return out


def key_relation_difference(u, v, w, x) -> BoundaryAlgebraElement:
    """``alpha_uw alpha_ux - 1/2 (alpha_vw - alpha_vx)(alpha_uw + alpha_ux)``."""
    half = Fraction(1, 2)
    lhs = monomial(alpha(u, w), alpha(u, x))
    rhs = multiply(linear({alpha(v, w): half, alpha(v, x): -half}),
                   linear({alpha(u, w): 1, alpha(u, x): 1}))
    return lhs - rhs


def check_key_relation(vertices: Iterable, u, v, w, x) -> bool:
    if len({u, v, w, x}) != 4:
        raise ValueError("u, v, w, x must be distinct")
    vertices = set(vertices)
    if not {u, v, w, x} <= vertices:
        raise ValueError("u, v, w, x must lie in the vertex set")
    return not impose_boundary(key_relation_difference(u, v, w, x), u, v, vertices)


def boundary_expansion_sides(k: int, u=None, v=None) -> tuple[BoundaryAlgebraElement, BoundaryAlgebraElement]:
    """Both sides of the expansion of ``alpha_1v ... alpha_kv`` over vertices
    ``1..k, u, v`` (by default ``u = k + 1`` and ``v = k + 2``)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    u = k + 1 if u is None else u
    v = k + 2 if v is None else v
    lhs = multiply(*(linear({alpha(i, v): 1}) for i in range(1, k + 1)))
    alternating = BoundaryAlgebraElement()
    for i in range(1, k + 1):
        sign = -1 if (k + i) % 2 else 1
        word = [alpha(j, u) for j in range(1, k + 1) if j != i]
        alternating.add_vector(monomial(*word), sign)
    weights = {alpha(1, v): 1}
    for j in range(2, k + 1):
        weights[alpha(j, v)] = 2 ** (j - 2)
    rhs = multiply(alternating, linear(weights))
    rhs = BoundaryAlgebraElement({w: Fraction(c, 2 ** (k - 1)) for w, c in rhs.items()})
    return lhs, rhs


def boundary_expansion_discrepancy(k: int) -> BoundaryAlgebraElement:
    """``LHS - RHS`` of the expansion after imposing the boundary relations."""
    lhs, rhs = boundary_expansion_sides(k)
    return impose_boundary(lhs - rhs, k + 1, k + 2, range(1, k + 3))


def check_boundary_expansion(k: int) -> bool:
    return not boundary_expansion_discrepancy(k)


def random_element(vertices: Sequence, rng, terms: int = 4, max_degree: int = 3) -> BoundaryAlgebraElement:
    """A random element with small integer coefficients (for property tests)."""
    pairs = [alpha(p, q) for i, p in enumerate(vertices) for q in vertices[i + 1:]]
    out = BoundaryAlgebraElement()
    for _ in range(terms):
        deg = rng.randint(0, min(max_degree, len(pairs)))
        word = rng.sample(pairs, deg)
        out.add_vector(monomial(*word), rng.randint(-3, 3))
    return out
