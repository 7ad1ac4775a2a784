"""Patterns, generating groups, their bases and coordinate maps.

A pattern P(M) is a set of representatives of the lattice ``M^{-1} Z^d``
modulo ``Z^d``; the generating group G(M^T) holds integer frequencies
modulo ``M^T Z^d``.  Both are addressed through the Smith normal form
``M = Q E R``: with ``k = d - d_M`` the pattern basis is
``y_j = R^{-1} e_{k+j} / eps_{k+j}`` and the generator basis is
``h_j = R^T e_{k+j}``, so that ``h_j^T y_i = delta_ij / eps_{k+i}``.

Points are exact: rational points are tuples of ``Fraction``, frequencies
tuples of ``int``.  Bulk enumeration goes through integer numpy arrays
(numerators over a common denominator), which is also exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import floor, prod
from typing import Literal, Sequence

import numpy as np

from . import intlinalg as il
from .exceptions import (
    BadFactorization,
    NotASubpattern,
    NotInLattice,
    NotInPattern,
    Unsupported,
)

Window = Literal["unit", "centered"]
WINDOWS = ("unit", "centered")

RationalVector = tuple[Fraction, ...]
IntVector = tuple[int, ...]


def _check_window(window: str) -> None:
    if window not in WINDOWS:
        raise ValueError(f"window must be one of {WINDOWS}, got {window!r}")


def basis_vectors(r, e: Sequence[int]) -> tuple[tuple[RationalVector, ...], tuple[IntVector, ...]]:
    """Pattern and generator basis vectors from the right SNF factor ``r``.

    Only the cycle lengths ``e`` larger than one contribute a basis vector.
    ``r`` is not required to come from an SNF of any particular matrix,
    which makes it possible to evaluate published factorizations as-is.
    """
    r = il.as_int_matrix(r)
    d = len(r)
    r_inv = il.inverse_rational(r)
    ys, hs = [], []
    for idx in range(d):
        if e[idx] == 1:
            continue
        ys.append(tuple(Fraction(r_inv[i][idx]) / e[idx] for i in range(d)))
        hs.append(tuple(r[idx][i] for i in range(d)))
    return tuple(ys), tuple(hs)


@dataclass(frozen=True)
class PatternBasis:
    """Basis of P(M) and G(M^T) derived from the Smith normal form of ``M``."""

    matrix: il.IntMatrix
    snf: il.SmithDecomposition = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def det(self) -> int:
        """``m = |det M|``, the number of pattern points."""
        return prod(self.snf.e)

    @property
    def d_m(self) -> int:
        return il.cycle_count(self.snf.e)

    @property
    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(v for v in self.snf.e if v > 1)

    @property
    def shape(self) -> tuple[int, ...]:
        """Shape of the index set; ``(1,)`` for the trivial group."""
        return self.cycle_lengths or (1,)

    @property
    def _offset(self) -> int:
        return self.dim - self.d_m

    @cached_property
    def _vectors(self):
        return basis_vectors(self.snf.r, self.snf.e)

    @property
    def pattern_vectors(self) -> tuple[RationalVector, ...]:
        return self._vectors[0]

    @property
    def generator_vectors(self) -> tuple[IntVector, ...]:
        return self._vectors[1]

    @cached_property
    def r_inverse(self) -> il.IntMatrix:
        return il.integer_inverse(self.snf.r)

    @cached_property
    def inverse(self) -> il.RationalMatrix:
        return il.inverse_rational(self.matrix)

    @property
    def denominator(self) -> int:
        """Common denominator of all pattern points (the largest cycle length)."""
        return self.snf.e[-1]

    # integer helpers for vectorised enumeration -------------------------
    @cached_property
    def _pattern_numerators(self) -> np.ndarray:
        """``(d_M, d)`` array: ``y_j * denominator`` as integers."""
        den = self.denominator
        ys = self.pattern_vectors
        out = np.zeros((len(ys), self.dim), dtype=np.int64)
        for j, y in enumerate(ys):
            out[j] = [int(v * den) for v in y]
        return out

    @cached_property
    def _generator_array(self) -> np.ndarray:
        return np.array(self.generator_vectors, dtype=np.int64).reshape(self.d_m, self.dim)

    @cached_property
    def _mt_reduction(self) -> tuple[np.ndarray, int, np.ndarray]:
        """``(A, D, M^T)`` with ``M^{-T} = A / D`` and ``D > 0``."""
        mt = il.transpose(self.matrix)
        det = il.determinant(mt)
        adj = np.array(il.adjugate(mt), dtype=np.int64)
        if det < 0:
            adj = -adj
        return adj, abs(det), np.array(mt, dtype=np.int64)

    def __hash__(self) -> int:
        return hash((self.matrix, self.snf))


def build_basis(m, snf: il.SmithDecomposition | None = None) -> PatternBasis:
    """Construct the pattern/generator bases of a regular integer matrix.

    A precomputed Smith decomposition may be supplied; it is checked against
    ``m`` before use.
    """
    m = il.as_int_matrix(m)
    if snf is None:
        snf = il.smith_normal_form(m)
    else:
        snf.check(m)
    return PatternBasis(matrix=m, snf=snf)


def _as_rational(x) -> RationalVector:
    return tuple(Fraction(v) for v in x)


def _reduce(v: Fraction, window: str) -> Fraction:
    if window == "unit":
        return v - floor(v)
    return v - floor(v + Fraction(1, 2))


def in_lattice(x, matrix) -> bool:
    x = _as_rational(x)
    return all(v.denominator == 1 for v in il.matvec(matrix, x))


def modulo_pattern(x, basis: PatternBasis, window: Window = "unit") -> RationalVector:
    """Representative of ``x + Z^d`` inside ``window``.

    Raises ``NotInLattice`` unless ``M x`` is integral.
    """
    _check_window(window)
    x = _as_rational(x)
    if not in_lattice(x, basis.matrix):
        raise NotInLattice(f"{x} is not a point of the lattice of {basis.matrix}")
    return tuple(_reduce(v, window) for v in x)


def index_grid(shape: Sequence[int]) -> np.ndarray:
    """All multi-indices of ``shape`` in row-major order, as an ``(N, len(shape))`` array."""
    if len(shape) == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices(tuple(shape), dtype=np.int64).reshape(len(shape), -1)
    return grids.T


def pattern_numerators(basis: PatternBasis, window: Window = "unit") -> tuple[np.ndarray, int]:
    """All pattern points in lambda-order as ``(numerators, denominator)``.

    ``numerators`` has shape ``(m, d)``; point ``i`` is ``numerators[i] / denominator``.
    """
    _check_window(window)
    den = basis.denominator
    lam = index_grid(basis.cycle_lengths)
    num = lam @ basis._pattern_numerators if basis.d_m else np.zeros((1, basis.dim), np.int64)
    if window == "unit":
        num = np.mod(num, den)
    else:
        num = num - den * np.floor_divide(2 * num + den, 2 * den)
    return num, den


def enumerate_pattern(basis: PatternBasis, window: Window = "unit") -> list[RationalVector]:
    """Pattern points ``sum_j lambda_j y_j mod Z^d`` in lexicographic lambda-order."""
    num, den = pattern_numerators(basis, window)
    return [tuple(Fraction(int(v), den) for v in row) for row in num]


def reduce_generators(k: np.ndarray, basis: PatternBasis) -> np.ndarray:
    """Reduce integer frequencies (rows of ``k``) into ``M^T [-1/2, 1/2)^d``."""
    adj, den, mt = basis._mt_reduction
    k = np.atleast_2d(np.asarray(k, dtype=np.int64))
    t = k @ adj.T
    shift = np.floor_divide(2 * t + den, 2 * den)
    return k - shift @ mt.T


def generator_points(basis: PatternBasis) -> np.ndarray:
    """All elements of G(M^T) in mu-order, shape ``(m, d)``."""
    mu = index_grid(basis.cycle_lengths)
    if basis.d_m == 0:
        return np.zeros((1, basis.dim), dtype=np.int64)
    return reduce_generators(mu @ basis._generator_array, basis)


def enumerate_generators(basis: PatternBasis) -> list[IntVector]:
    return [tuple(int(v) for v in row) for row in generator_points(basis)]


def reduce_generator(k, basis: PatternBasis) -> IntVector:
    return tuple(int(v) for v in reduce_generators(np.asarray([k]), basis)[0])


def point_to_index(x, basis: PatternBasis) -> tuple[int, ...]:
    """Coordinates ``lambda`` of a pattern point in the basis ``y_j``."""
    x = _as_rational(x)
    if not in_lattice(x, basis.matrix):
        raise NotInPattern(f"{x} is not in the pattern of {basis.matrix}")
    rx = il.matvec(basis.snf.r, x)
    off = basis._offset
    out = []
    for j, eps in enumerate(basis.cycle_lengths):
        v = eps * rx[off + j]
        assert v.denominator == 1
        out.append(int(v) % eps)
    return tuple(out)


def point_indices(num: np.ndarray, den: int, basis: PatternBasis) -> np.ndarray:
    """Vectorised :func:`point_to_index` for points ``num / den`` (rows)."""
    r = np.array(basis.snf.r, dtype=np.int64)
    rx = np.asarray(num, dtype=np.int64) @ r.T
    off = basis._offset
    cols = []
    for j, eps in enumerate(basis.cycle_lengths):
        scaled = rx[:, off + j] * eps
        if np.any(scaled % den):
            raise NotInPattern("points are not in the pattern")
        cols.append(np.mod(scaled // den, eps))
    if not cols:
        return np.zeros((len(rx), 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def generator_to_index(k, basis: PatternBasis) -> tuple[int, ...]:
    """Coordinates ``mu`` of an integer frequency in the basis ``h_j`` (mod ``M^T``)."""
    return tuple(int(v) for v in generator_indices(np.asarray([k]), basis)[0])


def generator_indices(k: np.ndarray, basis: PatternBasis) -> np.ndarray:
    rit = np.array(il.transpose(basis.r_inverse), dtype=np.int64)
    coords = np.atleast_2d(np.asarray(k, dtype=np.int64)) @ rit.T
    off = basis._offset
    eps = np.array(basis.cycle_lengths, dtype=np.int64)
    return np.mod(coords[:, off:], eps) if basis.d_m else coords[:, :0]


def ravel_index(idx, shape: Sequence[int]) -> int:
    """Row-major flat position of a multi-index."""
    flat = 0
    for i, n in zip(idx, shape):
        flat = flat * n + int(i)
    return flat


def _check_factorization(j, n, m=None) -> tuple[il.IntMatrix, il.IntMatrix, il.IntMatrix]:
    j = il.as_int_matrix(j)
    n = il.as_int_matrix(n)
    prod_jn = il.matmul(j, n)
    if m is not None and il.as_int_matrix(m) != prod_jn:
        raise BadFactorization(f"J N = {prod_jn} differs from M = {m}")
    if il.determinant(j) == 0 or il.determinant(n) == 0:
        raise BadFactorization("factors must be regular")
    return j, n, prod_jn


def split_point(y, j, n, window: Window = "unit", m=None) -> tuple[RationalVector, RationalVector]:
    """Unique ``(x, z)`` with ``y = x + N^{-1} z mod Z^d``, ``x`` in P(N), ``z`` in P(J)."""
    j, n, m = _check_factorization(j, n, m)
    y = _as_rational(y)
    if not in_lattice(y, m):
        raise NotInPattern(f"{y} is not in the pattern of {m}")
    z = tuple(_reduce(v, window) for v in il.matvec(n, y))
    n_inv = il.inverse_rational(n)
    shift = il.matvec(n_inv, z)
    x = tuple(_reduce(a - b, window) for a, b in zip(y, shift))
    return x, z


def projection_matrix(n_basis: PatternBasis, m_basis: PatternBasis) -> np.ndarray:
    """Integer ``P`` (``d_M x d_N``) with ``lambda = P mu mod eps^M`` for points of P(N).

    Column ``k`` holds the M-coordinates of the N-basis vector ``y_k``.
    """
    rel = il.matmul(m_basis.matrix, n_basis.inverse)
    if not il.is_integral(rel):
        raise NotASubpattern(f"P({n_basis.matrix}) is not contained in P({m_basis.matrix})")
    cols = [point_to_index(y, m_basis) for y in n_basis.pattern_vectors]
    return np.array(cols, dtype=np.int64).reshape(n_basis.d_m, m_basis.d_m).T


def generator_projection_matrix(n_basis: PatternBasis, m_basis: PatternBasis) -> np.ndarray:
    """``d_M x d_N`` matrix mapping N^T-generator coordinates to M^T coordinates.

    G(N^T) is a quotient of G(M^T) when ``M = J N``; ``P mu`` addresses one
    representative of the coset that ``mu`` labels.
    """
    rel = il.matmul(m_basis.matrix, n_basis.inverse)
    if not il.is_integral(rel):
        raise NotASubpattern(f"{n_basis.matrix} is not a right factor of {m_basis.matrix}")
    if n_basis.d_m == 0:
        return np.zeros((m_basis.d_m, 0), dtype=np.int64)
    return generator_indices(n_basis._generator_array, m_basis).T.copy()


@dataclass(frozen=True)
class ScalingReport:
    """Outcome of checking the scaling relation between P(N) and P(M = J N)."""

    case: int
    d_n: int
    d_m: int
    dimension_holds: bool
    eps_j: int
    direction: RationalVector
    # case 1
    index: int | None = None
    multiple: int | None = None
    direction_holds: bool | None = None
    # case 2
    lam: tuple[int, ...] | None = None
    mu: tuple[int, ...] | None = None
    projection: np.ndarray | None = field(default=None, compare=False)
    scaling_holds: bool | None = None
    projection_regular: bool | None = None


def scaling_case(j, n) -> ScalingReport:
    """Classify how P(N) grows to P(J N) when J has exactly one nontrivial cycle.

    With ``z_1`` the basis vector of P(J), ``w = N^{-1} z_1`` is the new
    direction.  Case 2 holds when ``w`` lies in the rational span of the
    N-basis modulo ``Z^d`` (then ``d_M = d_N`` is expected and
    ``eps^J lambda = P mu`` links the coordinates of ``w`` in P(M) to those of
    ``eps^J w`` in P(N)); otherwise case 1 (``d_M = d_N + 1`` expected, with
    ``w`` a multiple of a single M-basis vector of cycle length ``eps^J``).
    Every claim is evaluated, not assumed; the ``*_holds`` fields record it.
    """
    j, n, m = _check_factorization(j, n)
    jb, nb, mb = build_basis(j), build_basis(n), build_basis(m)
    if jb.d_m != 1:
        raise Unsupported(f"J must have exactly one nontrivial cycle, has {jb.d_m}")
    eps_j = jb.cycle_lengths[0]
    z1 = jb.pattern_vectors[0]
    w = modulo_pattern(il.matvec(nb.inverse, z1), mb)
    # span_Q{y_k} + Z^d pulled back by R_N: the first d - d_N coordinates must be integral
    rw = il.matvec(nb.snf.r, w)
    in_span = all(v.denominator == 1 for v in rw[: nb._offset])
    common = dict(d_n=nb.d_m, d_m=mb.d_m, eps_j=eps_j, direction=w)
    if not in_span:
        found = None
        mb_eps = mb.cycle_lengths
        for l, xl in enumerate(mb.pattern_vectors):
            for lam in range(1, eps_j):
                cand = tuple(_reduce(lam * v, "unit") for v in xl)
                if cand == w and mb_eps[l] == eps_j:
                    found = (l, lam)
                    break
            if found:
                break
        return ScalingReport(
            case=1,
            dimension_holds=mb.d_m == nb.d_m + 1,
            index=None if found is None else found[0],
            multiple=None if found is None else found[1],
            direction_holds=found is not None,
            **common,
        )
    lam = point_to_index(w, mb)
    mu = point_to_index(tuple(eps_j * v for v in w), nb)
    proj = projection_matrix(nb, mb)
    lhs = np.mod(eps_j * np.array(lam, dtype=np.int64), mb.cycle_lengths)
    rhs = np.mod(proj @ np.array(mu, dtype=np.int64), mb.cycle_lengths) if mb.d_m else lhs
    regular = proj.shape[0] == proj.shape[1] and (
        proj.size == 0 or il.determinant(proj.tolist()) != 0
    )
    return ScalingReport(
        case=2,
        dimension_holds=mb.d_m == nb.d_m,
        lam=lam,
        mu=mu,
        projection=proj,
        scaling_holds=bool(np.array_equal(lhs, rhs)),
        projection_regular=bool(regular),
        **common,
    )


def brute_force_pattern(m, window: Window = "unit") -> set[RationalVector]:
    """Scan ``M^{-1} k`` over an integer box; independent of any basis."""
    m = il.as_int_matrix(m)
    inv = il.inverse_rational(m)
    det = abs(il.determinant(m))
    # M [0,1)^d lies in this box, so it meets every congruence class
    box = [range(sum(min(0, v) for v in row), sum(max(0, v) for v in row) + 1) for row in m]
    out = set()
    for k in itertools.product(*box):
        x = tuple(_reduce(v, window) for v in il.matvec(inv, k))
        out.add(x)
        if len(out) == det:
            break
    return out
