"""Fourier transform on the pattern of a regular integer matrix.

Arrays are addressed by the basis coordinates of :mod:`patternfft.lattice`:
spatial values by ``lambda`` (pattern order), spectra by ``mu`` (generator
order), both row-major over the cycle lengths.  In these orderings the
Fourier matrix is exactly the Kronecker product of cyclic DFTs, so the fast
transform needs no reindexing: 1D transforms along the last axis, then the
remaining axes recursively.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Callable, Literal

import numpy as np
import scipy.fft

from .exceptions import ShapeMismatch, TooLarge
from .lattice import PatternBasis, generator_points, pattern_numerators

DENSE_LIMIT = int(os.environ.get("PATTERNFFT_DENSE_LIMIT", 4096))

Domain = Literal["spatial", "frequency"]


@dataclass
class LatticeArray:
    """Complex values on P(M) (``spatial``) or G(M^T) (``frequency``)."""

    basis: PatternBasis
    values: np.ndarray
    domain: Domain = "spatial"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        shape = self.basis.shape
        if values.size != self.basis.det:
            raise ShapeMismatch(f"expected {self.basis.det} values, got {values.size}")
        self.values = values.reshape(shape)
        if self.domain not in ("spatial", "frequency"):
            raise ValueError(f"unknown domain {self.domain!r}")

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.flat))

    def copy(self) -> "LatticeArray":
        return LatticeArray(self.basis, self.values.copy(), self.domain)


# ---------------------------------------------------------------------------
# one-dimensional transform


def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


@lru_cache(maxsize=256)
def _dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * (np.outer(k, k) % n) / n)


@lru_cache(maxsize=256)
def _twiddles(p: int, q: int) -> np.ndarray:
    n = p * q
    return np.exp(-2j * np.pi * (np.outer(np.arange(p), np.arange(q)) % n) / n)


_DIRECT_MAX = 16


def _dft(x: np.ndarray) -> np.ndarray:
    """Unnormalised DFT along the last axis (mixed radix, Bluestein for big primes)."""
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    p = _smallest_factor(n)
    if p == n:
        if n <= _DIRECT_MAX:
            return x @ _dft_matrix(n).T
        return _bluestein(x)
    q = n // p
    # decimation in time: x[s p + r] -> y[r, s]
    y = np.swapaxes(x.reshape(x.shape[:-1] + (q, p)), -1, -2)
    y = _dft(y) * _twiddles(p, q)
    # size-p transforms across r for every k1
    z = _dft(np.swapaxes(y, -1, -2)) if p > _DIRECT_MAX else np.swapaxes(
        np.einsum("kr,...rq->...kq", _dft_matrix(p), y), -1, -2
    )
    # z[..., k1, k2] holds X[k1 + q k2]
    return np.swapaxes(z, -1, -2).reshape(x.shape)


@lru_cache(maxsize=64)
def _chirp(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    k = np.arange(n)
    w = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    size = 1 << (2 * n - 2).bit_length()
    kernel = np.zeros(size, dtype=np.complex128)
    kernel[:n] = np.conj(w)
    kernel[size - n + 1 :] = np.conj(w[1:][::-1])
    return w, _dft(kernel), size


def _bluestein(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    w, kernel_hat, size = _chirp(n)
    buf = np.zeros(x.shape[:-1] + (size,), dtype=np.complex128)
    buf[..., :n] = x * w
    conv = np.conj(_dft(np.conj(_dft(buf) * kernel_hat))) / size
    return conv[..., :n] * w


def fft_1d(v, axis: int = -1) -> np.ndarray:
    """Unitary DFT of any length along ``axis``.

    Mixed-radix Cooley-Tukey over the prime factors of the length, with
    Bluestein's chirp-z for prime factors above a small threshold.
    """
    v = np.asarray(v, dtype=np.complex128)
    x = np.moveaxis(v, axis, -1)
    out = _dft(x) / np.sqrt(x.shape[-1])
    return np.moveaxis(out, -1, axis)


def _native(x: np.ndarray, axis: int, inverse: bool) -> np.ndarray:
    if inverse:
        return np.conj(fft_1d(np.conj(x), axis=axis))
    return fft_1d(x, axis=axis)


def _pocketfft(x: np.ndarray, axis: int, inverse: bool) -> np.ndarray:
    if inverse:
        return scipy.fft.ifft(x, axis=axis, norm="ortho")
    return scipy.fft.fft(x, axis=axis, norm="ortho")


ENGINES: dict[str, Callable[[np.ndarray, int, bool], np.ndarray]] = {
    "pocketfft": _pocketfft,
    "native": _native,
}


# ---------------------------------------------------------------------------
# dense reference


def _phase_matrix(basis: PatternBasis) -> tuple[np.ndarray, int]:
    """Integer ``h^T y * den mod den`` for all generator/pattern pairs."""
    num, den = pattern_numerators(basis)
    gens = generator_points(basis)
    return np.mod(gens @ num.T, den), den


def fourier_matrix(basis: PatternBasis, limit: int | None = None) -> np.ndarray:
    """Dense ``m x m`` Fourier matrix: rows in mu-order, columns in lambda-order."""
    limit = DENSE_LIMIT if limit is None else limit
    m = basis.det
    if m > limit:
        raise TooLarge(f"dense Fourier matrix of size {m} exceeds limit {limit}")
    phase, den = _phase_matrix(basis)
    return np.exp(-2j * np.pi * phase / den) / np.sqrt(m)


def cyclic_fourier_matrix(n: int) -> np.ndarray:
    return _dft_matrix(n) / np.sqrt(n)


def kronecker_reference(basis: PatternBasis) -> np.ndarray:
    """``F_{eps_1} (x) ... (x) F_{eps_d}`` over the nontrivial cycles."""
    return reduce(np.kron, (cyclic_fourier_matrix(e) for e in basis.cycle_lengths), np.ones((1, 1)))


def assert_kronecker_structure(basis: PatternBasis, limit: int | None = None, tol: float = 1e-12) -> bool:
    f = fourier_matrix(basis, limit)
    return bool(np.max(np.abs(f - kronecker_reference(basis))) <= tol)


def _check_domain(a: LatticeArray, domain: str) -> None:
    if a.domain != domain:
        raise ShapeMismatch(f"expected a {domain} array, got {a.domain}")


def dft_naive(a: LatticeArray, limit: int | None = None) -> LatticeArray:
    """Dense matrix-vector Fourier transform; the oracle for :func:`fft_pattern`."""
    _check_domain(a, "spatial")
    f = fourier_matrix(a.basis, limit)
    return LatticeArray(a.basis, f @ a.flat, "frequency")


def idft_naive(ahat: LatticeArray, limit: int | None = None) -> LatticeArray:
    _check_domain(ahat, "frequency")
    f = fourier_matrix(ahat.basis, limit)
    return LatticeArray(ahat.basis, f.conj().T @ ahat.flat, "spatial")


# ---------------------------------------------------------------------------
# fast transform


@dataclass(frozen=True)
class FourierPlan:
    """Execution plan for the pattern FFT of one basis.

    ``workers`` sets how many threads share the disjoint block (first stage)
    and strided-slice (second stage) partitions; ``engine`` picks the 1D FFT.
    """

    basis: PatternBasis
    workers: int = 1
    engine: str = "pocketfft"
    sizes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sizes", self.basis.shape)
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {sorted(ENGINES)}")
        if self.workers < 1:
            raise ValueError("workers must be positive")


def make_plan(basis: PatternBasis, workers: int | None = None, engine: str = "pocketfft") -> FourierPlan:
    if workers is None:
        workers = int(os.environ.get("PATTERNFFT_THREADS", 1))
    return FourierPlan(basis, workers=workers, engine=engine)


_executors: dict[int, ThreadPoolExecutor] = {}


def _executor(workers: int) -> ThreadPoolExecutor:
    ex = _executors.get(workers)
    if ex is None:
        ex = _executors[workers] = ThreadPoolExecutor(max_workers=workers)
    return ex


def _chunks(n: int, parts: int) -> list[slice]:
    parts = max(1, min(parts, n))
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _serial(x: np.ndarray, naxes: int, one_d, inverse: bool) -> np.ndarray:
    # first stage: all blocks along the last pattern axis at once
    x = one_d(x, naxes - 1, inverse)
    if naxes == 1:
        return x
    # second stage: every fixed last index is an independent (naxes-1)-axis transform
    return _serial(x, naxes - 1, one_d, inverse)


def _parallel(x: np.ndarray, naxes: int, one_d, inverse: bool, workers: int) -> np.ndarray:
    ex = _executor(workers)
    last = naxes - 1
    out = np.empty_like(x)
    if naxes == 1:
        return one_d(x, 0, inverse)

    def stage_one(sl):
        out[sl] = one_d(x[sl], last, inverse)

    list(ex.map(stage_one, _chunks(x.shape[0], workers)))

    def stage_two(sl):
        idx = (slice(None),) * last + (sl,)
        out[idx] = _serial(out[idx], last, one_d, inverse)

    list(ex.map(stage_two, _chunks(x.shape[last], workers)))
    return out


def _run(values: np.ndarray, plan: FourierPlan, inverse: bool) -> np.ndarray:
    basis = plan.basis
    if basis.d_m == 0:
        return values.astype(np.complex128, copy=True)
    one_d = ENGINES[plan.engine]
    naxes = basis.d_m
    if plan.workers > 1 and values.size >= 2:
        return _parallel(values, naxes, one_d, inverse, plan.workers)
    return _serial(values, naxes, one_d, inverse)


def _as_plan(basis: PatternBasis, plan: FourierPlan | None) -> FourierPlan:
    if plan is None:
        return make_plan(basis)
    if plan.basis != basis:
        raise ShapeMismatch("plan was built for a different matrix")
    return plan


def fft_pattern(a: LatticeArray, plan: FourierPlan | None = None) -> LatticeArray:
    """Fast unitary Fourier transform on P(M); spatial in, frequency out."""
    _check_domain(a, "spatial")
    plan = _as_plan(a.basis, plan)
    return LatticeArray(a.basis, _run(a.values, plan, inverse=False), "frequency")


def ifft_pattern(ahat: LatticeArray, plan: FourierPlan | None = None) -> LatticeArray:
    """Inverse of :func:`fft_pattern` (conjugate, transform, conjugate)."""
    _check_domain(ahat, "frequency")
    plan = _as_plan(ahat.basis, plan)
    return LatticeArray(ahat.basis, _run(ahat.values, plan, inverse=True), "spatial")


def fft_values(values: np.ndarray, plan: FourierPlan, inverse: bool = False) -> np.ndarray:
    """Transform a raw array shaped like ``plan.sizes`` (plus trailing batch axes)."""
    values = np.asarray(values, dtype=np.complex128)
    return _run(values, plan, inverse)


def pattern_convolve(a: LatticeArray, b: LatticeArray) -> LatticeArray:
    """Direct ``O(m^2)`` group convolution ``sum_y a_y b_{x - y}`` on P(M)."""
    if a.basis != b.basis:
        raise ShapeMismatch("arrays live on different patterns")
    shape = a.basis.shape
    lam = np.indices(shape).reshape(len(shape), -1).T
    af, bf = a.flat, b.flat
    out = np.zeros_like(af)
    for i, x in enumerate(lam):
        diff = np.mod(x - lam, shape)
        flat = np.ravel_multi_index(diff.T, shape)
        out[i] = np.sum(af * bf[flat])
    return LatticeArray(a.basis, out, "spatial")
