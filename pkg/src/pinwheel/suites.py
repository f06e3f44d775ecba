"""Verification suites.

Every suite takes a :class:`RunConfig` and returns report rows
``(suite, parameter, expected, actual, status)`` with status ``PASS``,
``FAIL`` or ``INFO``.  Rows are produced in a fixed order so reports are
reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, NamedTuple

from . import arnold, boundary, cooperad
from .complexes import (
    AFFINE, PROJECTIVE_BASED, PSI_SIGN, GradedBasis, assemble_differential, d_affine,
    d_proj, d_proj_raw, enumerate_projective, filtration_level, pinwheel_vector, plus_graph,
    psi_chain, psi_inverse, reduce_to_based, relabel_chain,
)
from .graph import INT, SignedCanonicalGraph, relabel_external
from .homology import homology_report, prefetch
from .linalg import SparseVector

PASS, FAIL, INFO = "PASS", "FAIL", "INFO"


class Row(NamedTuple):
    suite: str
    parameter: str
    expected: str
    actual: str
    status: str


@dataclass
class RunConfig:
    arity: int = 3
    mode: str = "projective"
    max_internal: int = 2
    degree_min: int | None = None
    degree_max: int | None = None
    suites: tuple = ()
    fmt: str = "text"
    out: str | None = None
    cache_dir: str | None = None
    workers: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.arity < 1:
            raise ValueError("--arity must be at least 1")
        if self.max_internal < 0:
            raise ValueError("--max-internal must be non-negative")
        if (self.degree_min is not None and self.degree_max is not None
                and self.degree_min > self.degree_max):
            raise ValueError("empty degree range")
        if self.workers < 1:
            raise ValueError("--workers must be at least 1")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)}")

    def in_range(self, d: int) -> bool:
        return ((self.degree_min is None or d >= self.degree_min)
                and (self.degree_max is None or d <= self.degree_max))

    def basis(self, labels=None, mode: str = PROJECTIVE_BASED) -> GradedBasis:
        from .cache import BasisCache, default_cache_dir

        directory = self.cache_dir or default_cache_dir()
        cache = BasisCache(directory) if directory else None
        b = GradedBasis(range(self.arity) if labels is None else labels, mode, cache)
        if mode == PROJECTIVE_BASED:
            prefetch(b, self.max_internal, self.workers)
        return b


def _row(suite, parameter, expected, actual) -> Row:
    status = PASS if str(expected) == str(actual) else FAIL
    return Row(suite, parameter, str(expected), str(actual), status)


def _all_based(cfg: RunConfig, max_internal: int | None = None) -> list:
    top = cfg.max_internal if max_internal is None else max_internal
    b = cfg.basis()
    return [g for m in range(top + 1) for d in b.degree_range(m) for g in b.block(d, m)]


# -- d squared -----------------------------------------------------------

def suite_d2(cfg: RunConfig) -> list[Row]:
    b = cfg.basis()
    rows = []
    for m in range(2, cfg.max_internal + 1):
        nnz = checked = 0
        for d in b.degree_range(m):
            if not cfg.in_range(d):
                continue
            src, mid, dst = b.block(d, m), b.block(d + 1, m - 1), b.block(d + 2, m - 2)
            if not (src and mid and dst):
                continue
            first = assemble_differential(src, mid, "d_proj")
            second = assemble_differential(mid, dst, "d_proj")
            nnz += (second @ first).nnz()
            checked += 1
        rows.append(_row("d2", f"n={cfg.arity} m={m} blocks={checked}", 0, nnz))
    return rows


# -- pinwheel kernel -----------------------------------------------------

def suite_pinwheel(cfg: RunConfig) -> list[Row]:
    rows = []
    for m in range(1, cfg.max_internal + 1):
        count = bad = 0
        for g in enumerate_projective(range(cfg.arity), m):
            sg = SignedCanonicalGraph(g, 1)
            for i in range(m):
                count += 1
                if reduce_to_based(pinwheel_vector(sg, (INT, i))):
                    bad += 1
        rows.append(_row("pinwheel", f"n={cfg.arity} m={m} generators={count}", 0, bad))
    return rows


# -- psi -----------------------------------------------------------------

def suite_psi(cfg: RunConfig) -> list[Row]:
    n = cfg.arity
    if n < 2:
        return [Row("psi", f"n={n}", "-", "-", INFO)]
    based = cfg.basis()
    affine = GradedBasis(range(1, n), AFFINE)
    rows = []
    bad_round = 0
    for m in range(cfg.max_internal + 1):
        degrees = sorted(set(based.degree_range(m)) | set(affine.degree_range(m)))
        pc = [len(based.block(d, m)) for d in degrees]
        ac = [len(affine.block(d, m)) for d in degrees]
        first = next((i for i, (p, a) in enumerate(zip(pc, ac)) if p or a), 0)
        rows.append(_row("psi", f"n={n} m={m} counts from d={degrees[first]}",
                         "/".join(map(str, pc[first:])), "/".join(map(str, ac[first:]))))
        for d in degrees:
            for x in affine.block(d, m):
                if psi_inverse(psi_chain({x: 1})) != {x: 1}:
                    bad_round += 1
    rows.append(_row("psi", f"n={n} roundtrip failures", 0, bad_round))
    return rows


def filtration_failures(n: int, max_internal: int, sign: int = PSI_SIGN) -> tuple[int, int]:
    """Count affine elements ``x`` for which ``d_proj psi x - sign * psi d_aff x``
    has a term of filtration level at most that of ``psi x``."""
    affine = GradedBasis(range(1, n), AFFINE)
    total = bad = 0
    for m in range(max_internal + 1):
        for d in affine.degree_range(m):
            for x in affine.block(d, m):
                total += 1
                err = d_proj(psi_chain({x: 1})) - psi_chain(d_affine({x: 1})).scaled(sign)
                if any(filtration_level(g) <= len(x.eta) for g in err):
                    bad += 1
    return total, bad


def suite_filtration(cfg: RunConfig) -> list[Row]:
    n = cfg.arity
    if n < 2:
        return [Row("filtration", f"n={n}", "-", "-", INFO)]
    total, bad = filtration_failures(n, cfg.max_internal)
    rows = [_row("filtration", f"n={n} elements={total} sign={PSI_SIGN:+d}", 0, bad)]
    _, other = filtration_failures(n, cfg.max_internal, -PSI_SIGN)
    rows.append(Row("filtration", f"n={n} elements={total} sign={-PSI_SIGN:+d}", "-",
                    str(other), INFO))
    return rows


# -- worked example ------------------------------------------------------

def plus_graph_example() -> dict:
    g = plus_graph().graph
    raw = d_proj_raw(g)
    words = arnold.graph_alpha_words(raw)
    cyclic = arnold.normalize_alpha_words(dict(arnold.cyclic_arnold_words((0, 1, 2, 3))))
    return {
        "graph": g,
        "terms": raw,
        "alpha_words": words,
        "cyclic": cyclic,
        "q_image": arnold.quotient_q(raw),
        "reduced": d_proj({g: 1}),
    }


def suite_plus_graph(cfg: RunConfig) -> list[Row]:
    ex = plus_graph_example()
    return [
        _row("plus-graph", "terms in d(plus)", 12, len(ex["terms"])),
        _row("plus-graph", "coefficients are +-1", True,
             all(abs(c) == 1 for c in ex["terms"].values())),
        _row("plus-graph", "q-image equals cyclic Arnold sum", True, ex["alpha_words"] == ex["cyclic"]),
        _row("plus-graph", "q(d plus) reduces to 0", 0, len(ex["q_image"])),
    ]


# -- equivariance --------------------------------------------------------

def generators(n: int) -> list[tuple[str, dict]]:
    out = [(f"({i} {i + 1})", {a: a for a in range(n)} | {i: i + 1, i + 1: i}) for i in range(n - 1)]
    if n > 2:
        out.append(("cycle", {a: (a + 1) % n for a in range(n)}))
    return out


def suite_equivariance(cfg: RunConfig) -> list[Row]:
    graphs = _all_based(cfg)
    labels = tuple(range(cfg.arity))
    rows = []
    for name, sigma in generators(cfg.arity):
        bad_d = bad_q = 0
        for g in graphs:
            moved = reduce_to_based(relabel_chain({g: 1}, sigma))
            if d_proj(moved) != reduce_to_based(relabel_chain(d_proj({g: 1}), sigma)):
                bad_d += 1
            if arnold.quotient_q(moved) != arnold.act(sigma, arnold.quotient_q({g: 1}), labels):
                bad_q += 1
        rows.append(_row("equivariance", f"n={cfg.arity} sigma={name} d_proj graphs={len(graphs)}", 0, bad_d))
        rows.append(_row("equivariance", f"n={cfg.arity} sigma={name} q graphs={len(graphs)}", 0, bad_q))
    return rows


# -- cooperad ------------------------------------------------------------

def partitions(labels) -> list[tuple[frozenset, frozenset]]:
    labels = list(labels)
    out = []
    for r in range(1, len(labels)):
        for I in itertools.combinations(labels, r):
            out.append((frozenset(I), frozenset(labels) - frozenset(I)))
    return out


def three_part(labels) -> list[tuple[frozenset, frozenset, frozenset]]:
    out = []
    for assign in itertools.product(range(3), repeat=len(labels)):
        parts = tuple(frozenset(l for l, a in zip(labels, assign) if a == k) for k in range(3))
        if all(parts):
            out.append(parts)
    return out


def relabel_tensor(t, sigma) -> SparseVector:
    out = SparseVector()
    for (a, b), c in t.items():
        ra = relabel_external(SignedCanonicalGraph(a, 1), {k: sigma.get(k, k) for k in a.externals})
        rb = relabel_external(SignedCanonicalGraph(b, 1), {k: sigma.get(k, k) for k in b.externals})
        if ra.sign and rb.sign:
            out.add((ra.graph, rb.graph), c * ra.sign * rb.sign)
    return out


def nested_left(g, I, J, K, aux) -> SparseVector:
    """Cut off ``I`` first, then split the remainder into ``J`` and ``K``."""
    a, b, c, d = aux
    out = SparseVector()
    for (A, rest), co in cooperad.cocompose({g: 1}, I, J | K, (a, b)).items():
        for (B, C), c2 in cooperad.cocompose({rest: 1}, J | {b}, K, (c, d)).items():
            out.add((A, B, C), co * c2)
    return out


def nested_right(g, I, J, K, aux) -> SparseVector:
    """Cut off ``K`` first, then split the remainder into ``I`` and ``J``."""
    a, b, c, d = aux
    out = SparseVector()
    for (rest, C), co in cooperad.cocompose({g: 1}, I | J, K, (c, d)).items():
        for (A, B), c2 in cooperad.cocompose({rest: 1}, I, J | {c}, (a, b)).items():
            out.add((A, B, C), co * c2)
    return out


def suite_cooperad(cfg: RunConfig) -> list[Row]:
    n = cfg.arity
    graphs = _all_based(cfg)
    labels = tuple(range(n))
    x, y = cooperad.default_aux_labels(labels)
    chain = comm = square = 0
    parts = partitions(labels)
    for I, J in parts:
        for g in graphs:
            t = cooperad.cocompose({g: 1}, I, J)
            if cooperad.tensor_differential(t) != cooperad.cocompose(d_proj({g: 1}), I, J):
                chain += 1
            flipped = relabel_tensor(cooperad.swap(cooperad.cocompose({g: 1}, J, I)), {x: y, y: x})
            if flipped != t:
                comm += 1
            q_side = cooperad.cocompose_cohomology(arnold.quotient_q({g: 1}), labels, I, J)
            if cooperad.q_tensor(t) != q_side:
                square += 1
    assoc = 0
    triples = three_part(labels)
    aux = (n, n + 1, n + 2, n + 3)
    for I, J, K in triples:
        for g in graphs:
            if nested_left(g, I, J, K, aux) != nested_right(g, I, J, K, aux):
                assoc += 1
    p = f"n={n} m<={cfg.max_internal} graphs={len(graphs)}"
    return [
        _row("cooperad", f"{p} chain map partitions={len(parts)}", 0, chain),
        _row("cooperad", f"{p} cocommutativity partitions={len(parts)}", 0, comm),
        _row("cooperad", f"{p} q square partitions={len(parts)}", 0, square),
        _row("cooperad", f"{p} coassociativity triples={len(triples)}", 0, assoc),
    ]


# -- presentations -------------------------------------------------------

def permutation_count(n: int) -> int:
    return sum(1 for _ in itertools.permutations(range(n)))


def suite_presentation(cfg: RunConfig) -> list[Row]:
    rows = []
    for n in range(2, cfg.arity + 1):
        points = range(1, n + 1)
        bad = checked = 0
        for i, j, k in itertools.permutations(points, 3):
            rel = SparseVector()
            for word, c in arnold.arnold_relation(i, j, k):
                rel.add_vector(arnold.reduce_arnold(word), c)
            checked += 1
            bad += bool(rel)
        rows.append(_row("presentation", f"arnold n={n} relations={checked}", 0, bad))
        bad = checked = 0
        for quad in itertools.permutations(range(n), 4):
            rel = SparseVector()
            for word, c in arnold.cyclic_arnold_words(quad):
                rel.add_vector(arnold.alpha_expand(word, range(n)), c)
            checked += 1
            bad += bool(rel)
        rows.append(_row("presentation", f"cyclic n={n} relations={checked}", 0, bad))
        rows.append(_row("presentation", f"dim H(D_2({n}))", permutation_count(n),
                         sum(arnold.configuration_betti(n))))
        framed = permutation_count(n - 1) * sum(1 for _ in itertools.product((0, 1), repeat=n - 1))
        rows.append(_row("presentation", f"dim H(M_{n})", framed, sum(arnold.betti_table(n))))
    return rows


# -- boundary identities -------------------------------------------------

def suite_boundary(cfg: RunConfig) -> list[Row]:
    vertices = tuple(range(6))
    bad = checked = 0
    for u, v, w, x in itertools.permutations(vertices, 4):
        checked += 1
        bad += not boundary.check_key_relation(vertices, u, v, w, x)
    rows = [_row("boundary", f"key relation tuples={checked}", 0, bad)]
    for k in range(1, 6):
        rows.append(_row("boundary", f"expansion k={k}", True, boundary.check_boundary_expansion(k)))
    rng = random.Random(cfg.seed)
    bad_idem = bad_mult = 0
    for _ in range(100):
        a = boundary.random_element(vertices, rng)
        b = boundary.random_element(vertices, rng)
        ia = boundary.impose_boundary(a, 0, 1, vertices)
        bad_idem += boundary.impose_boundary(ia, 0, 1, vertices) != ia
        ib = boundary.impose_boundary(b, 0, 1, vertices)
        lhs = boundary.impose_boundary(boundary.multiply(a, b), 0, 1, vertices)
        bad_mult += lhs != boundary.multiply(ia, ib)
    rows.append(_row("boundary", f"idempotence samples=100 seed={cfg.seed}", 0, bad_idem))
    rows.append(_row("boundary", f"multiplicativity samples=100 seed={cfg.seed}", 0, bad_mult))
    return rows


# -- homology ------------------------------------------------------------

def homology_rows(cfg: RunConfig) -> list[Row]:
    b = cfg.basis()
    rep = homology_report(cfg.arity, cfg.max_internal, b.cache, cfg.workers)
    rows = []
    n, top = cfg.arity, cfg.max_internal
    for d in rep.degrees:
        if not cfg.in_range(d):
            continue
        betti = rep.betti_at(d)
        if top >= 1:
            rows.append(_row("homology", f"n={n} d={d} exact layers m<{top}", betti, rep.exact[d]))
        rows.append(_row("homology", f"n={n} d={d} q-surjectivity rank", betti, rep.q_rank[d]))
        seq = "/".join(str(rep.raw[M][d]) for M in range(top + 1))
        flag = {True: "stable", False: "not stabilized", None: "single level"}[rep.stable(d)]
        rows.append(Row("homology", f"n={n} d={d} truncation M=0..{top} ({flag})",
                        str(betti), seq, INFO))
    return rows


SUITES: dict[str, Callable[[RunConfig], list[Row]]] = {
    "d2": suite_d2,
    "pinwheel": suite_pinwheel,
    "psi": suite_psi,
    "filtration": suite_filtration,
    "plus-graph": suite_plus_graph,
    "equivariance": suite_equivariance,
    "cooperad": suite_cooperad,
    "presentation": suite_presentation,
    "boundary": suite_boundary,
    "homology": homology_rows,
}
