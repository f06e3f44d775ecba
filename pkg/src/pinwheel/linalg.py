"""Exact sparse linear algebra over the rationals.

Vectors are dictionaries from hashable basis keys to nonzero rationals
(``int`` or :class:`fractions.Fraction`).  Ranks are computed by
fraction-free elimination on integer rows.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence


class ContractViolation(ValueError):
    """Raised when an input breaks a documented precondition."""


class SparseVector(dict):
    """A finitely supported linear combination ``{key: coefficient}``.

    Zero coefficients are never stored.
    """

    def add(self, key: Hashable, coeff) -> None:
        if not coeff:
            return
        c = self.get(key, 0) + coeff
        if c:
            self[key] = c
        else:
            del self[key]

    def add_vector(self, other: Mapping, scale=1) -> None:
        if not scale:
            return
        for key, c in other.items():
            self.add(key, scale * c)

    def scaled(self, scale) -> "SparseVector":
        out = SparseVector()
        if scale:
            for key, c in self.items():
                out[key] = c * scale
        return out

    def __add__(self, other: Mapping) -> "SparseVector":
        out = SparseVector(self)
        out.add_vector(other)
        return out

    def __sub__(self, other: Mapping) -> "SparseVector":
        out = SparseVector(self)
        out.add_vector(other, -1)
        return out

    def __neg__(self) -> "SparseVector":
        return self.scaled(-1)

    def __repr__(self) -> str:
        return f"SparseVector({dict.__repr__(self)})"


def vector(items: Iterable[tuple[Hashable, object]]) -> SparseVector:
    out = SparseVector()
    for key, c in items:
        out.add(key, c)
    return out


class SparseMatrix:
    """Matrix with explicit row and column key sets.

    The matrix of a linear map ``f`` has one column per source key and
    one row per target key, so it acts on column vectors.
    """

    def __init__(self, rows: Sequence[Hashable], cols: Sequence[Hashable],
                 entries: Mapping[tuple[Hashable, Hashable], object] | None = None):
        self.rows = list(rows)
        self.cols = list(cols)
        self.row_index = {k: i for i, k in enumerate(self.rows)}
        self.col_index = {k: j for j, k in enumerate(self.cols)}
        if len(self.row_index) != len(self.rows) or len(self.col_index) != len(self.cols):
            raise ContractViolation("duplicate row or column key")
        self.entries: dict[tuple[int, int], object] = {}
        for (r, c), v in (entries or {}).items():
            self.set(r, c, v)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def set(self, row_key, col_key, value) -> None:
        try:
            i, j = self.row_index[row_key], self.col_index[col_key]
        except KeyError as exc:
            raise ContractViolation(f"key {exc.args[0]!r} not in declared index set") from None
        if value:
            self.entries[i, j] = value
        else:
            self.entries.pop((i, j), None)

    def get(self, row_key, col_key):
        return self.entries.get((self.row_index[row_key], self.col_index[col_key]), 0)

    def set_column(self, col_key, column: Mapping) -> None:
        for row_key, v in column.items():
            self.set(row_key, col_key, v)

    def column(self, col_key) -> SparseVector:
        j = self.col_index[col_key]
        return vector((self.rows[i], v) for (i, jj), v in self.entries.items() if jj == j)

    def row_vectors(self) -> list[dict[int, object]]:
        out: list[dict[int, object]] = [{} for _ in self.rows]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        t = SparseMatrix(self.cols, self.rows)
        t.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return t

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ContractViolation("inner index sets differ")
        by_row: dict[int, list[tuple[int, object]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], object] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + a * b
        out = SparseMatrix(self.rows, other.cols)
        out.entries = {ij: v for ij, v in acc.items() if v}
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    # -- dump format -------------------------------------------------
    def dumps(self) -> str:
        """Coordinate triplets ``row col num/den`` after a dimension header."""
        lines = [f"% {len(self.rows)} {len(self.cols)} {len(self.entries)}"]
        for (i, j), v in sorted(self.entries.items()):
            f = Fraction(v)
            lines.append(f"{i} {j} {f.numerator}/{f.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, rows=None, cols=None) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "%" or len(head) != 4:
            raise ValueError("missing matrix header")
        nrows, ncols, nnz = map(int, head[1:])
        m = cls(rows if rows is not None else range(nrows),
                cols if cols is not None else range(ncols))
        if m.shape != (nrows, ncols):
            raise ValueError("key sets do not match header dimensions")
        for ln in lines[1:]:
            i, j, q = ln.split()
            m.entries[int(i), int(j)] = Fraction(q)
        if len(m.entries) != nnz:
            raise ValueError("entry count does not match header")
        return m


# -- elimination ---------------------------------------------------------

def _integer_rows(rows: Iterable[Mapping[int, object]]) -> list[dict[int, int]]:
    out = []
    for row in rows:
        if not row:
            continue
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // math.gcd(den, v.denominator)
        r = {j: int(v * den) for j, v in row.items() if v}
        if r:
            out.append(_primitive(r))
    return out


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


def _echelon(rows: list[dict[int, int]]) -> list[dict[int, int]]:
    """Fraction-free sparse row echelon form; returns the pivot rows.

    Rows are bucketed by leading column.  For each column the pivot is the
    candidate whose leading entry has the smallest bit length (ties: fewest
    nonzeros); every other candidate is combined as ``p_c * r - r_c * p``
    and reduced to its primitive part.
    """
    buckets: dict[int, list[dict[int, int]]] = {}
    for r in rows:
        buckets.setdefault(min(r), []).append(r)
    pivots = []
    while buckets:
        c = min(buckets)
        cand = buckets.pop(c)
        p = min(cand, key=lambda r: (abs(r[c]).bit_length(), len(r)))
        pivots.append(p)
        pc = p[c]
        for r in cand:
            if r is p:
                continue
            rc = r[c]
            g = math.gcd(pc, rc)
            a, b = pc // g, rc // g
            new = {j: a * v for j, v in r.items()}
            for j, v in p.items():
                w = new.get(j, 0) - b * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if new:
                new = _primitive(new)
                buckets.setdefault(min(new), []).append(new)
    return pivots


def rank(m: SparseMatrix) -> int:
    """Exact rank over the rationals."""
    return len(_echelon(_integer_rows(m.row_vectors())))


def rank_mod_p(m: SparseMatrix, p: int) -> int:
    """Rank of the matrix reduced modulo the prime ``p``.

    Entries with denominators divisible by ``p`` are not allowed.
    """
    rows = []
    for row in m.row_vectors():
        r = {}
        for j, v in row.items():
            f = Fraction(v)
            if f.denominator % p == 0:
                raise ContractViolation(f"denominator divisible by {p}")
            x = f.numerator * pow(f.denominator, -1, p) % p
            if x:
                r[j] = x
        if r:
            rows.append(r)
    buckets: dict[int, list[dict[int, int]]] = {}
    for r in rows:
        buckets.setdefault(min(r), []).append(r)
    count = 0
    while buckets:
        c = min(buckets)
        cand = buckets.pop(c)
        piv = min(cand, key=len)
        count += 1
        inv = pow(piv[c], -1, p)
        for r in cand:
            if r is piv:
                continue
            f = r[c] * inv % p
            new = dict(r)
            for j, v in piv.items():
                w = (new.get(j, 0) - f * v) % p
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if new:
                buckets.setdefault(min(new), []).append(new)
    return count


def homology_dimension(d_in: SparseMatrix, d_out: SparseMatrix) -> int:
    """``dim ker(d_out) - rank(d_in)`` at the middle term of ``d_in``, ``d_out``."""
    if d_in.rows != d_out.cols:
        raise ContractViolation("d_in target and d_out source index different spaces")
    if not (d_out @ d_in).is_zero():
        raise ContractViolation("d_out . d_in is not zero")
    return len(d_out.cols) - rank(d_out) - rank(d_in)


def in_row_span(m: SparseMatrix, v: Mapping) -> bool:
    """True iff the vector ``v`` (keyed by column keys) is a rational
    combination of the rows of ``m``."""
    for key in v:
        if key not in m.col_index:
            raise ContractViolation(f"key {key!r} is not a column key")
    vec = {m.col_index[k]: c for k, c in v.items() if c}
    if not vec:
        return True
    base = _integer_rows(m.row_vectors())
    r0 = len(_echelon(list(base)))
    return len(_echelon(base + _integer_rows([vec]))) == r0
