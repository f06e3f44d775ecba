"""Cohomology of configuration spaces and of the framed moduli spaces.

Classes on a label set ``V`` (basepoint ``b = min(V)``) are written in the
generators ``omega(i, j)`` and ``eta(i)`` with ``i, j`` in ``V - {b}``.  The
normal basis is

    omega(i1, j1) ... omega(ik, jk) eta(l1) ... eta(lr)

with ``i_t < j_t``, ``j_1 < ... < j_k`` and ``l_1 < ... < l_r``.  Words are
brought into this form by anticommutation, ``omega(i, j) = omega(j, i)`` and
the Arnold relation.

The cyclic generators ``alpha(u, v)`` (``u != v`` in ``V``) are expanded by
``alpha(b, i) = eta(i)`` and ``alpha(i, j) = eta(i) + eta(j) - 2 omega(i, j)``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exterior import permutation_sign, sort_word, wedge
from .graph import EXT, Graph
from .linalg import SparseVector

OMEGA, ETA = "w", "e"


class OmegaEtaMonomial(NamedTuple):
    omega: tuple = ()
    eta: tuple = ()

    @property
    def degree(self) -> int:
        return len(self.omega) + len(self.eta)


CohClass = SparseVector


def omega(i, j) -> tuple:
    return (OMEGA, min(i, j), max(i, j))


def eta(i) -> tuple:
    return (ETA, i)


# -- Arnold rewriting ----------------------------------------------------

@lru_cache(maxsize=None)
def _reduce_omega(word: tuple) -> tuple[tuple[tuple, int], ...]:
    """Normal form of a product of omegas given as sorted pairs."""
    if len(set(word)) < len(word):
        return ()
    order = sorted(range(len(word)), key=lambda t: (word[t][1], t))
    sign = permutation_sign(order)
    w = [word[t] for t in order]
    for t in range(len(w) - 2, -1, -1):
        if w[t][1] != w[t + 1][1]:
            continue
        (i, j), (k, _) = w[t], w[t + 1]
        if i > k:
            i, k = k, i
            sign = -sign
        # omega_ij omega_kj = omega_ik omega_kj - omega_ik omega_ij   (i < k < j)
        a = tuple(w[:t]) + ((i, k), (k, j)) + tuple(w[t + 2:])
        b = tuple(w[:t]) + ((i, k), (i, j)) + tuple(w[t + 2:])
        acc = SparseVector()
        for key, c in _reduce_omega(a):
            acc.add(key, sign * c)
        for key, c in _reduce_omega(b):
            acc.add(key, -sign * c)
        return tuple(sorted(acc.items()))
    return ((tuple(w), sign),)


def reduce_arnold(word: Sequence[tuple]) -> CohClass:
    """Normal form of a product of ``omega``/``eta`` generators."""
    omegas, etas = [], []
    inversions = 0
    for letter in word:
        if letter[0] == OMEGA:
            if letter[1] == letter[2]:
                raise ValueError(f"degenerate generator {letter}")
            omegas.append((min(letter[1:]), max(letter[1:])))
            inversions += len(etas)
        else:
            etas.append(letter[1])
    sign = -1 if inversions % 2 else 1
    s_eta, eta_word = sort_word(etas)
    out = CohClass()
    if not s_eta:
        return out
    for om, c in _reduce_omega(tuple(omegas)):
        out.add(OmegaEtaMonomial(om, eta_word), sign * s_eta * c)
    return out


def monomial_word(mono: OmegaEtaMonomial) -> tuple:
    return tuple(omega(i, j) for i, j in mono.omega) + tuple(eta(i) for i in mono.eta)


def multiply(x: Mapping[OmegaEtaMonomial, object], y: Mapping[OmegaEtaMonomial, object]) -> CohClass:
    out = CohClass()
    for a, ca in x.items():
        wa = monomial_word(a)
        for b, cb in y.items():
            out.add_vector(reduce_arnold(wa + monomial_word(b)), ca * cb)
    return out


def _times_generator(x: Mapping[OmegaEtaMonomial, object], gens: Mapping[tuple, object]) -> CohClass:
    out = CohClass()
    for a, ca in x.items():
        wa = monomial_word(a)
        for g, cg in gens.items():
            out.add_vector(reduce_arnold(wa + (g,)), ca * cg)
    return out


# -- alpha generators ----------------------------------------------------

def alpha_letter(u, v, basepoint) -> dict[tuple, object]:
    """A single alpha generator in omega/eta coordinates."""
    if u == v:
        raise ValueError("alpha needs two distinct labels")
    if basepoint == u:
        return {eta(v): 1}
    if basepoint == v:
        return {eta(u): 1}
    return {eta(u): 1, eta(v): 1, omega(u, v): -2}


def alpha_expand(word: Sequence[tuple], labels: Iterable) -> CohClass:
    """Substitute and reduce a product of alpha generators."""
    xs = tuple(sorted(labels))
    b = xs[0]
    known = set(xs)
    out = CohClass({OmegaEtaMonomial(): 1})
    for u, v in word:
        if u not in known or v not in known:
            raise ValueError(f"alpha({u}, {v}) uses a label outside {xs}")
        out = _times_generator(out, alpha_letter(u, v, b))
        if not out:
            break
    return out


def alpha_combination_expand(x: Mapping[tuple, object], labels: Iterable) -> CohClass:
    labels = tuple(labels)
    out = CohClass()
    for w, c in x.items():
        out.add_vector(alpha_expand(w, labels), c)
    return out


def normalize_alpha_words(x: Mapping[tuple, object]) -> SparseVector:
    """Sort each pair (``alpha(u, v) = alpha(v, u)``) and then each word."""
    out = SparseVector()
    for w, c in x.items():
        s, sw = sort_word(tuple((min(p), max(p)) for p in w))
        if s:
            out.add(sw, s * c)
    return out


def to_alpha(c: Mapping[OmegaEtaMonomial, object], labels: Iterable) -> SparseVector:
    """Write a class as a combination of sorted alpha words.

    Uses ``eta(i) = alpha(b, i)`` and
    ``omega(i, j) = (alpha(b, i) + alpha(b, j) - alpha(i, j)) / 2``.
    """
    b = min(labels)
    half = Fraction(1, 2)
    out = SparseVector()
    for mono, coeff in c.items():
        acc = SparseVector({(): coeff})
        for letter in monomial_word(mono):
            if letter[0] == ETA:
                gen = {((b, letter[1]),): 1}
            else:
                i, j = letter[1], letter[2]
                gen = {((b, i),): half, ((b, j),): half, ((i, j),): -half}
            acc = wedge(acc, gen)
        out.add_vector(acc)
    return out


def act(sigma: Mapping, c: Mapping[OmegaEtaMonomial, object], labels: Iterable) -> CohClass:
    """Action of a bijection of the label set on a class."""
    labels = tuple(sorted(labels))
    out = CohClass()
    for w, coeff in to_alpha(c, labels).items():
        moved = tuple((sigma[u], sigma[v]) for u, v in w)
        out.add_vector(alpha_expand(moved, sorted(sigma[a] for a in labels)), coeff)
    return out


# -- relations and bases -------------------------------------------------

def arnold_relation(i, j, k) -> list[tuple[tuple, int]]:
    """``w_ij w_jk + w_jk w_ki + w_ki w_ij`` as a list of (word, coefficient)."""
    return [((omega(i, j), omega(j, k)), 1), ((omega(j, k), omega(k, i)), 1),
            ((omega(k, i), omega(i, j)), 1)]


_EVEN_PERMS_4 = [p for p in itertools.permutations(range(4)) if permutation_sign(p) == 1]


def cyclic_arnold_words(quad: Sequence) -> list[tuple[tuple, int]]:
    """The cyclic Arnold relation on four distinct labels: the sum over the
    alternating group of ``alpha(q_s1, q_s2) alpha(q_s2, q_s3)``."""
    out = []
    for p in _EVEN_PERMS_4:
        a, b, c = quad[p[0]], quad[p[1]], quad[p[2]]
        out.append((((a, b), (b, c)), 1))
    return out


def normal_basis(labels: Iterable, degree: int | None = None) -> list[OmegaEtaMonomial]:
    """Normal-basis monomials of the cohomology on ``labels``."""
    xs = tuple(sorted(labels))[1:]
    omega_choices = []
    for idx, j in enumerate(xs):
        omega_choices.append([None] + [(i, j) for i in xs[:idx]])
    out = []
    for pick in itertools.product(*omega_choices):
        om = tuple(p for p in pick if p is not None)
        for r in range(len(xs) + 1):
            if degree is not None and len(om) + r != degree:
                continue
            for et in itertools.combinations(xs, r):
                out.append(OmegaEtaMonomial(om, et))
    return sorted(out)


def betti_table(n: int) -> list[int]:
    """Dimensions ``H^d`` of the framed moduli space with ``n`` marked points."""
    if n < 1:
        raise ValueError("n must be at least 1")
    table: list[int] = []
    for mono in normal_basis(range(n)):
        while len(table) <= mono.degree:
            table.append(0)
        table[mono.degree] += 1
    return table


def configuration_betti(n: int) -> list[int]:
    """Dimensions of ``H^d`` of the configuration space of ``n`` points
    (the eta-free part of the normal basis)."""
    table = [0] * max(n, 1)
    for mono in normal_basis(range(n + 1)):
        if not mono.eta:
            table[len(mono.omega)] += 1
    return table


# -- the quotient map ----------------------------------------------------

def graph_class(g: Graph) -> CohClass:
    """Image of a single canonical graph: zero with internal vertices,
    otherwise the alpha product over its edges in canonical order."""
    if g.internal_count:
        return CohClass()
    word = []
    for a, b in g.edges:
        if a[0] != EXT or b[0] != EXT:
            return CohClass()
        word.append((a[1], b[1]))
    return alpha_expand(word, g.externals)


def graph_alpha_words(x: Mapping[Graph, object]) -> SparseVector:
    """``q`` before substitution: internal-vertex-free graphs as alpha words."""
    out = SparseVector()
    for g, c in x.items():
        if g.internal_count:
            continue
        out.add(tuple((a[1], b[1]) for a, b in g.edges), c)
    return normalize_alpha_words(out)


@lru_cache(maxsize=None)
def _graph_class_cached(g: Graph) -> tuple:
    return tuple(graph_class(g).items())


def quotient_q(x: Mapping[Graph, object]) -> CohClass:
    out = CohClass()
    for g, c in x.items():
        for mono, coeff in _graph_class_cached(g):
            out.add(mono, c * coeff)
    return out


# -- serialization -------------------------------------------------------

def class_records(c: Mapping[OmegaEtaMonomial, object]) -> list[dict]:
    out = []
    for mono, coeff in sorted(c.items()):
        f = Fraction(coeff)
        out.append({"omega": [list(p) for p in mono.omega], "eta": list(mono.eta),
                    "coefficient": str(f)})
    return out


def class_from_records(recs: Iterable[Mapping]) -> CohClass:
    out = CohClass()
    for r in recs:
        mono = OmegaEtaMonomial(tuple(tuple(p) for p in r["omega"]), tuple(r["eta"]))
        out.add(mono, Fraction(r["coefficient"]))
    return out
