"""Homology of truncated projective complexes and the image of ``q``.

The differential sends the ``(d, m)`` block (degree ``d``, ``m`` internal
vertices) to the ``(d + 1, m - 1)`` block, so the truncation to ``m <= M``
splits as a sum over ``m`` of small pieces.  For ``m < M`` the homology
``H_{d,m}`` sees both the incoming and the outgoing map and is therefore the
same as in the full complex; the top layer ``m = M`` has no incoming map
and only bounds the true homology from above.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .arnold import betti_table, normal_basis, quotient_q
from .complexes import PROJECTIVE_BASED, GradedBasis, assemble_differential
from .linalg import SparseMatrix, rank

DEFAULT_CANDIDATE_LIMIT = 5_000_000


class InfeasibleError(RuntimeError):
    """A requested block is too large to enumerate."""


def block_cost(n: int, d: int, m: int) -> int:
    """Number of edge sets examined when enumerating the based ``(d, m)`` block."""
    total = (n + m) * (n + m - 1) // 2
    free = total - m
    k = d + 3 * m - m
    if k < 0 or k > free:
        return 0
    return math.comb(free, k)


def check_feasible(n: int, max_internal: int, limit: int = DEFAULT_CANDIDATE_LIMIT) -> int:
    """Total enumeration cost; raises :class:`InfeasibleError` naming the
    first block over ``limit``."""
    total = 0
    basis = GradedBasis(range(n), PROJECTIVE_BASED)
    for m in range(max_internal + 1):
        for d in basis.degree_range(m):
            c = block_cost(n, d, m)
            if c > limit:
                raise InfeasibleError(
                    f"block (d={d}, m={m}) needs {c} candidate edge sets (limit {limit})")
            total += c
    return total


def _enumerate_block(args):
    labels, mode, d, m = args
    return GradedBasis(labels, mode)._enumerate(d, m)


def prefetch(basis: GradedBasis, max_internal: int, workers: int = 1) -> None:
    """Fill every block up to ``max_internal``, optionally in parallel."""
    pairs = [(d, m) for m in range(max_internal + 1) for d in basis.degree_range(m)]
    if workers <= 1:
        for d, m in pairs:
            basis.block(d, m)
        return
    todo = []
    for d, m in pairs:
        if (d, m) in basis._blocks:
            continue
        if basis.cache is not None:
            keys = basis.cache.load(basis.labels, basis.mode, d, m)
            if keys is not None:
                basis._blocks[d, m] = keys
                continue
        todo.append((d, m))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(_enumerate_block, [(basis.labels, basis.mode, d, m) for d, m in todo])
        for (d, m), keys in zip(todo, results):
            if basis.cache is not None:
                basis.cache.store(basis.labels, basis.mode, d, m, keys)
            basis._blocks[d, m] = keys


def differential_ranks(basis: GradedBasis, max_internal: int) -> dict[tuple[int, int], int]:
    """Rank of ``d`` out of each block ``(d, m)`` with ``1 <= m <= max_internal``."""
    out = {}
    for m in range(1, max_internal + 1):
        for d in basis.degree_range(m):
            src = basis.block(d, m)
            if not src:
                continue
            dst = basis.block(d + 1, m - 1)
            out[d, m] = rank(assemble_differential(src, dst, "d_proj")) if dst else 0
    return out


def q_matrix(labels: Iterable, graphs: list, degree: int) -> SparseMatrix:
    mat = SparseMatrix(normal_basis(labels, degree), graphs)
    for g in graphs:
        mat.set_column(g, quotient_q({g: 1}))
    return mat


@dataclass
class HomologyReport:
    n: int
    max_internal: int
    degrees: list[int]
    betti: list[int]
    block_dims: dict[tuple[int, int], int]
    ranks: dict[tuple[int, int], int]
    q_rank: dict[int, int]
    raw: dict[int, dict[int, int]] = field(default_factory=dict)
    exact: dict[int, int] = field(default_factory=dict)
    exact_blocks: dict[tuple[int, int], int] = field(default_factory=dict)

    def betti_at(self, d: int) -> int:
        return self.betti[d] if 0 <= d < len(self.betti) else 0

    def stable(self, d: int) -> bool | None:
        """Whether the raw truncation homology in degree ``d`` no longer
        changes between the last two truncation levels (``None`` for M=0)."""
        if self.max_internal == 0:
            return None
        return self.raw[self.max_internal][d] == self.raw[self.max_internal - 1][d]

    def q_surjective(self, d: int) -> bool:
        return self.q_rank.get(d, 0) == self.betti_at(d)


def block_homology(dims, ranks, d: int, m: int, top: int) -> int:
    """``H_{d,m}`` inside the truncation ``m <= top``."""
    incoming = ranks.get((d - 1, m + 1), 0) if m + 1 <= top else 0
    return dims.get((d, m), 0) - ranks.get((d, m), 0) - incoming


def homology_report(n: int, max_internal: int, cache=None, workers: int = 1,
                    degrees: Iterable[int] | None = None) -> HomologyReport:
    if n < 1:
        raise ValueError("arity must be at least 1")
    if max_internal < 0:
        raise ValueError("max_internal must be non-negative")
    labels = tuple(range(n))
    basis = GradedBasis(labels, PROJECTIVE_BASED, cache)
    prefetch(basis, max_internal, workers)
    dims = {}
    for m in range(max_internal + 1):
        for d in basis.degree_range(m):
            if basis.block(d, m):
                dims[d, m] = len(basis.block(d, m))
    ranks = differential_ranks(basis, max_internal)
    all_degrees = sorted({d for d, _ in dims} | set(range(len(betti_table(n)))))
    if degrees is not None:
        wanted = set(degrees)
        all_degrees = [d for d in all_degrees if d in wanted]
    q_rank = {}
    for d in all_degrees:
        graphs = basis.block(d, 0) if d >= 0 else []
        q_rank[d] = rank(q_matrix(labels, graphs, d)) if graphs else 0
    report = HomologyReport(n, max_internal, all_degrees, betti_table(n), dims, ranks, q_rank)
    for top in range(max_internal + 1):
        report.raw[top] = {d: sum(block_homology(dims, ranks, d, m, top) for m in range(top + 1))
                           for d in all_degrees}
    for d in all_degrees:
        for m in range(max_internal):
            report.exact_blocks[d, m] = block_homology(dims, ranks, d, m, max_internal)
        report.exact[d] = sum(report.exact_blocks[d, m] for m in range(max_internal))
    return report
