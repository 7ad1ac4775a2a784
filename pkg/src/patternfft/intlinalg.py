"""Exact integer and rational linear algebra for small square matrices.

Matrices are plain tuples of row tuples holding Python ``int`` (or
``fractions.Fraction`` for rational results), so every operation is exact
and values are hashable and immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

import numpy as np

from .exceptions import PatternError, SingularMatrix

IntMatrix = tuple[tuple[int, ...], ...]
RationalMatrix = tuple[tuple[Fraction, ...], ...]


def as_int_matrix(m) -> IntMatrix:
    """Validate and convert ``m`` into an immutable square integer matrix."""
    if isinstance(m, np.ndarray):
        m = m.tolist()
    rows = [list(r) for r in m]
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise PatternError(f"expected a non-empty square matrix, got {m!r}")
    out = []
    for r in rows:
        row = []
        for v in r:
            iv = int(v)
            if iv != v:
                raise PatternError(f"non-integer entry {v!r}")
            row.append(iv)
        out.append(tuple(row))
    return tuple(out)


def identity(d: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def diag(*entries: int) -> IntMatrix:
    d = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(d)) for i in range(d))


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def determinant(m) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    a = [list(r) for r in as_int_matrix(m)]
    d = len(a)
    sign = 1
    prev = 1
    for k in range(d - 1):
        if a[k][k] == 0:
            for i in range(k + 1, d):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[d - 1][d - 1]


def adjugate(m) -> IntMatrix:
    """Integer adjugate, so that ``m @ adjugate(m) == det(m) * I``."""
    m = as_int_matrix(m)
    d = len(m)
    if d == 1:
        return ((1,),)
    cof = []
    for i in range(d):
        row = []
        for j in range(d):
            minor = tuple(
                tuple(m[r][c] for c in range(d) if c != j) for r in range(d) if r != i
            )
            row.append((-1) ** (i + j) * determinant(minor))
        cof.append(row)
    return transpose(cof)


def inverse_rational(m) -> RationalMatrix:
    """Exact inverse over the rationals.

    Raises
    ------
    SingularMatrix
        If ``det(m) == 0``.
    """
    m = as_int_matrix(m)
    det = determinant(m)
    if det == 0:
        raise SingularMatrix(f"matrix {m} is singular")
    adj = adjugate(m)
    return tuple(tuple(Fraction(v, det) for v in row) for row in adj)


def is_unimodular(m) -> bool:
    return abs(determinant(m)) == 1


def integer_inverse(m) -> IntMatrix:
    """Inverse of a unimodular matrix (an integer matrix)."""
    m = as_int_matrix(m)
    det = determinant(m)
    if abs(det) != 1:
        raise PatternError(f"matrix {m} is not unimodular")
    return tuple(tuple(v * det for v in row) for row in adjugate(m))


@dataclass(frozen=True)
class SmithDecomposition:
    """``m == q @ diag(e) @ r`` with unimodular ``q``, ``r`` and ``e[j] | e[j+1]``."""

    q: IntMatrix
    e: tuple[int, ...]
    r: IntMatrix

    @property
    def dim(self) -> int:
        return len(self.e)

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        return self.e

    def product(self) -> IntMatrix:
        return matmul(matmul(self.q, diag(*self.e)), self.r)

    def check(self, m=None) -> None:
        """Raise ``PatternError`` unless every invariant holds (against ``m`` if given)."""
        if m is not None and self.product() != as_int_matrix(m):
            raise PatternError("Q E R does not reproduce the matrix")
        if abs(determinant(self.q)) != 1 or abs(determinant(self.r)) != 1:
            raise PatternError("Q and R must be unimodular")
        if any(v < 1 for v in self.e):
            raise PatternError("elementary divisors must be positive")
        if any(self.e[j + 1] % self.e[j] for j in range(len(self.e) - 1)):
            raise PatternError("divisibility chain violated")


def smith_normal_form(m) -> SmithDecomposition:
    """Smith normal form ``m = Q E R`` of a regular integer matrix.

    Integer row/column reduction: the pivot is the smallest nonzero entry in
    absolute value (ties broken by lowest ``(row, col)``), the pivot row and
    column are cleared with Euclidean steps, and a pivot that does not divide
    the remaining block absorbs the offending row before reducing again.
    ``M = Q A R`` is maintained throughout, so ``Q`` and ``R`` are updated
    with the inverses of the elementary operations applied to ``A``.
    """
    m = as_int_matrix(m)
    d = len(m)
    if determinant(m) == 0:
        raise SingularMatrix(f"matrix {m} is singular")
    a = [list(r) for r in m]
    q = [list(r) for r in identity(d)]
    r = [list(row) for row in identity(d)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        for row in q:  # Q <- Q P, P = P^-1 swaps columns of Q
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        r[i], r[j] = r[j], r[i]

    def add_row(i, j, c):
        # row_i += c row_j ; Q <- Q (I - c e_i e_j^T): col_j(Q) -= c col_i(Q)
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        for row in q:
            row[j] -= c * row[i]

    def add_col(i, j, c):
        # col_i += c col_j ; R <- (I - c e_j e_i^T) R: row_j(R) -= c row_i(R)
        for row in a:
            row[i] += c * row[j]
        r[j] = [x - c * y for x, y in zip(r[j], r[i])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        for row in q:
            row[i] = -row[i]

    for t in range(d):
        while True:
            pivot = None
            for i in range(t, d):
                for j in range(t, d):
                    v = abs(a[i][j])
                    if v and (pivot is None or v < pivot[0]):
                        pivot = (v, i, j)
            _, pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, d):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, d):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, d) for j in range(t + 1, d) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)

    e = tuple(a[i][i] for i in range(d))
    snf = SmithDecomposition(
        q=tuple(tuple(row) for row in q), e=e, r=tuple(tuple(row) for row in r)
    )
    return snf


def elementary_divisors_by_minors(m) -> tuple[int, ...]:
    """Elementary divisors from determinantal divisors (gcd of k-minors).

    Exponential in ``d``; meant as an independent check for small matrices.
    """
    from itertools import combinations

    m = as_int_matrix(m)
    d = len(m)
    dets = [1]
    for k in range(1, d + 1):
        g = 0
        for rows in combinations(range(d), k):
            for cols in combinations(range(d), k):
                g = gcd(g, determinant(tuple(tuple(m[i][j] for j in cols) for i in rows)))
        dets.append(g)
    return tuple(dets[k] // dets[k - 1] for k in range(1, d + 1))


def abs_det(m) -> int:
    return abs(determinant(m))


def is_integral(m: Sequence[Sequence[Fraction]]) -> bool:
    return all(Fraction(v).denominator == 1 for row in m for v in row)


def rational_matmul(a, b) -> RationalMatrix:
    return tuple(tuple(Fraction(v) for v in row) for row in matmul(a, b))


def cycle_count(e: Sequence[int]) -> int:
    """Number of elementary divisors larger than one."""
    return sum(1 for v in e if v > 1)


def order(e: Sequence[int]) -> int:
    return prod(e)
