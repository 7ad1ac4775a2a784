"""Dirichlet kernels on patterns, their two-scale filters and wavelets.

The Dirichlet kernel of ``M`` has Fourier coefficients

    c_k = m^{-1/2} 2^{-r(k)/2}   for  M^{-T} k in [-1/2, 1/2]^d,

where ``r(k)`` counts the coordinates of ``M^{-T} k`` equal to ``+-1/2``.
Frequencies on the boundary of the closed cube come in groups of ``2^r``
congruent points; the weights make the squared coefficients of every
congruence class sum to ``1/m``, which is exactly translate orthonormality.

All boundary tests are done on integer numerators (``M^{-T} = A / D``), so
nothing here depends on floating-point rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import lcm

import numpy as np

from . import intlinalg as il
from .exceptions import BadFactorization, NonInvertibleKernel, ShapeMismatch
from .fft import FourierPlan, LatticeArray, fft_pattern, ifft_pattern, make_plan
from .lattice import (
    PatternBasis,
    build_basis,
    enumerate_pattern,
    generator_indices,
    generator_points,
    pattern_numerators,
    reduce_generators,
)
from .wavelet import FilterBank

# the three two-fold splits used for the directional demos
J_X = ((2, 0), (0, 1))
J_Y = ((1, 0), (0, 2))
J_D = ((1, 1), (-1, 1))


def _flat_indices(k: np.ndarray, basis: PatternBasis) -> np.ndarray:
    mu = generator_indices(k, basis)
    if basis.d_m == 0:
        return np.zeros(len(mu), dtype=np.int64)
    return np.ravel_multi_index(tuple(mu.T), basis.cycle_lengths)


def boundary_counts(k: np.ndarray, basis: PatternBasis) -> np.ndarray:
    """Vectorised :func:`boundary_count` over the rows of ``k``."""
    adj, den, _ = basis._mt_reduction
    h = reduce_generators(k, basis)
    t = h @ adj.T
    return np.sum(2 * np.abs(t) == den, axis=1)


def boundary_count(k, basis: PatternBasis) -> int:
    """Number of coordinates of ``M^{-T} h`` equal to ``+-1/2`` (``h`` the reduced ``k``)."""
    return int(boundary_counts(np.asarray([k]), basis)[0])


@dataclass(frozen=True, eq=False)
class KernelSpectrum:
    """Finitely supported Fourier series ``sum_k c_k e^{i k x}``.

    ``support`` is ``(K, d)`` integer, ``values`` is ``(K,)`` complex and
    ``classes[i]`` is the mu-flat index of ``support[i]`` in G(M^T).
    """

    basis: PatternBasis
    support: np.ndarray
    values: np.ndarray
    classes: np.ndarray

    @property
    def coeffs(self) -> dict[tuple[int, ...], complex]:
        return {tuple(int(v) for v in k): complex(c) for k, c in zip(self.support, self.values)}

    def coefficient(self, k) -> complex:
        return self.coeffs.get(tuple(int(v) for v in k), 0j)

    def coset_sums(self) -> np.ndarray:
        """``sum_{k = h mod M^T} c_k`` for every ``h`` of G(M^T), mu-flat order."""
        return np.bincount(self.classes, weights=self.values.real, minlength=self.basis.det) + 1j * np.bincount(
            self.classes, weights=self.values.imag, minlength=self.basis.det
        )

    def coset_energy(self) -> np.ndarray:
        return np.bincount(self.classes, weights=np.abs(self.values) ** 2, minlength=self.basis.det)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def inner(self, other: "KernelSpectrum") -> complex:
        """L2 inner product (normalized measure) via Parseval on the common support."""
        mine = self.coeffs
        return complex(sum(c * np.conj(other.coeffs.get(k, 0)) for k, c in mine.items()))

    def evaluate(self, x) -> np.ndarray:
        """Values at ``2 pi x`` for points ``x`` given as rows."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.exp(2j * np.pi * x @ self.support.T) @ self.values

    def translated(self, a: LatticeArray) -> "KernelSpectrum":
        """Spectrum of ``sum_y a_y T(y) f`` for spatial coefficients ``a`` on P(M)."""
        if a.basis.matrix != self.basis.matrix or a.domain != "spatial":
            raise ShapeMismatch("coefficients must be spatial on the kernel's pattern")
        ahat = fft_pattern(a).flat
        vals = self.values * np.sqrt(self.basis.det) * ahat[self.classes]
        return KernelSpectrum(self.basis, self.support, vals, self.classes)


def dirichlet_spectrum(basis: PatternBasis) -> KernelSpectrum:
    """Fourier coefficients of the Dirichlet kernel on the closed cube ``M^T [-1/2,1/2]^d``."""
    adj, den, mt = basis._mt_reduction
    h = generator_points(basis)
    boundary = 2 * (h @ adj.T) == -den  # reduced points sit in the half-open cube
    r = boundary.sum(axis=1)
    weight = np.sqrt(basis.det) ** -1 * 2.0 ** (-r / 2)
    support, values, classes = [], [], []
    rows = np.arange(len(h))
    for s in product((0, 1), repeat=basis.dim):
        s = np.array(s, dtype=np.int64)
        ok = np.all(boundary | (s == 0), axis=1)
        support.append(h[ok] + s @ mt.T)
        values.append(weight[ok])
        classes.append(rows[ok])
    support = np.concatenate(support)
    order = np.lexsort(support.T[::-1])
    return KernelSpectrum(
        basis,
        support[order],
        np.concatenate(values)[order].astype(np.complex128),
        np.concatenate(classes)[order],
    )


def translate_gram(spectrum: KernelSpectrum) -> np.ndarray:
    """Gram matrix ``<T(y) f, T(y') f>`` over P(M) by direct summation over the support."""
    num, den = pattern_numerators(spectrum.basis)
    phase = np.mod(num @ spectrum.support.T, den)  # exact k.y * den
    e = np.exp(-2j * np.pi * phase / den)
    w = np.abs(spectrum.values) ** 2
    return (e * w) @ e.conj().T


def _split(m_basis: PatternBasis, n_basis: PatternBasis) -> il.IntMatrix:
    j = il.matmul(m_basis.matrix, il.inverse_rational(n_basis.matrix))
    if not il.is_integral(j):
        raise BadFactorization(f"{n_basis.matrix} is not a right factor of {m_basis.matrix}")
    j = tuple(tuple(int(v) for v in row) for row in j)
    if il.abs_det(j) != 2:
        raise BadFactorization(f"the split {j} must have |det| = 2")
    return j


def scaling_filter(m_basis: PatternBasis, n_basis: PatternBasis) -> LatticeArray:
    """Two-scale filter ``ahat`` on G(M^T) with ``c_k(phi_N) = ahat[k] c_k(phi_M)``."""
    _split(m_basis, n_basis)
    h = generator_points(m_basis)
    adj_m, den_m, _ = m_basis._mt_reduction
    adj_n, den_n, _ = n_basis._mt_reduction
    r_m = np.sum(2 * np.abs(h @ adj_m.T) == den_m, axis=1)
    u = 2 * np.abs(h @ adj_n.T)
    inside = np.all(u <= den_n, axis=1)
    r_n = np.sum(u == den_n, axis=1)
    vals = np.where(inside, 2.0 ** ((1 + r_m - r_n) / 2), 0.0)
    return LatticeArray(m_basis, vals, "frequency")


def _wavelet_filter(m_basis: PatternBasis, n_basis: PatternBasis, j_basis: PatternBasis) -> np.ndarray:
    ahat = scaling_filter(m_basis, n_basis).flat
    y = enumerate_pattern(j_basis)[1]
    g = generator_points(j_basis)[1]
    h = generator_points(m_basis)
    nt = np.array(il.transpose(n_basis.matrix), dtype=np.int64)
    shifted = _flat_indices(h + g @ nt.T, m_basis)
    v = il.matvec(il.inverse_rational(n_basis.matrix), y)
    den = lcm(*(Fraction(c).denominator for c in v))
    vnum = np.array([int(c * den) for c in v], dtype=np.int64)
    phase = np.mod(h @ vnum, den)  # exact h^T N^{-1} y mod 1, times den
    return ahat[shifted] * np.exp(-2j * np.pi * phase / den)


def wavelet_spectrum(m_basis: PatternBasis, n_basis: PatternBasis, j_basis: PatternBasis) -> KernelSpectrum:
    """Spectrum of the wavelet completing ``phi_N`` to an orthonormal basis of V_M."""
    if il.matmul(j_basis.matrix, n_basis.matrix) != m_basis.matrix:
        raise BadFactorization("J N must equal M")
    _split(m_basis, n_basis)
    phi = dirichlet_spectrum(m_basis)
    filt = _wavelet_filter(m_basis, n_basis, j_basis)
    return KernelSpectrum(m_basis, phi.support, phi.values * filt[phi.classes], phi.classes)


def scaled_spectrum(m_basis: PatternBasis, n_basis: PatternBasis) -> KernelSpectrum:
    """``phi_N`` written through the filter: coefficients ``ahat[k] c_k(phi_M)``."""
    phi = dirichlet_spectrum(m_basis)
    ahat = scaling_filter(m_basis, n_basis).flat
    vals = phi.values * ahat[phi.classes]
    keep = vals != 0
    return KernelSpectrum(m_basis, phi.support[keep], vals[keep], phi.classes[keep])


def filter_bank_from_dirichlet(m_basis: PatternBasis, n_basis: PatternBasis, j_basis: PatternBasis) -> FilterBank:
    """Low-pass (scaling) and high-pass (wavelet) filters for ``M = J N``, ``|det J| = 2``."""
    if il.matmul(j_basis.matrix, n_basis.matrix) != m_basis.matrix:
        raise BadFactorization("J N must equal M")
    _split(m_basis, n_basis)
    low = scaling_filter(m_basis, n_basis).flat
    high = _wavelet_filter(m_basis, n_basis, j_basis)
    return FilterBank(m_basis, n_basis, j_basis, np.stack([low, high]))


def dirichlet_bank(m, j) -> FilterBank:
    """Convenience: the Dirichlet filter bank for ``M`` split by ``J``."""
    from .wavelet import factor

    n = factor(m, j)
    return filter_bank_from_dirichlet(build_basis(m), build_basis(n), build_basis(j))


def dyadic_chain(m, splits) -> list[FilterBank]:
    """Successive Dirichlet banks ``M_0 = M``, ``M_{k+1} = J_k^{-1} M_k``."""
    chain = []
    current = il.as_int_matrix(m)
    for j in splits:
        fb = dirichlet_bank(current, j)
        chain.append(fb)
        current = fb.n_basis.matrix
    return chain


@dataclass(frozen=True, eq=False)
class _Kernel:
    spectrum: KernelSpectrum

    @cached_property
    def symbol(self) -> np.ndarray:
        sums = self.spectrum.coset_sums()
        scale = np.max(np.abs(sums))
        if scale == 0 or np.min(np.abs(sums)) <= 1e-13 * scale:
            raise NonInvertibleKernel("the kernel's coset sums vanish somewhere")
        return sums * self.spectrum.basis.det


def samples_to_translate_coeffs(
    s: LatticeArray, spectrum: KernelSpectrum, plan: FourierPlan | None = None
) -> LatticeArray:
    """Coefficients ``a`` of the interpolant ``sum_y a_y T(y) f`` of samples ``f(2 pi x)``.

    Sampling the translates is a group convolution with the kernel's values
    on the pattern, whose unitary transform is ``sqrt(m)`` times the coset
    sums; hence ``ahat = shat / (m * coset_sums)``.
    """
    if s.basis.matrix != spectrum.basis.matrix or s.domain != "spatial":
        raise ShapeMismatch("samples must be spatial on the kernel's pattern")
    plan = plan or make_plan(s.basis)
    symbol = _Kernel(spectrum).symbol.reshape(s.basis.shape)
    shat = fft_pattern(s, plan)
    return ifft_pattern(LatticeArray(s.basis, shat.values / symbol, "frequency"), plan)


def translate_coeffs_to_samples(
    a: LatticeArray, spectrum: KernelSpectrum, plan: FourierPlan | None = None
) -> LatticeArray:
    """Inverse of :func:`samples_to_translate_coeffs`: samples at the pattern points."""
    if a.basis.matrix != spectrum.basis.matrix or a.domain != "spatial":
        raise ShapeMismatch("coefficients must be spatial on the kernel's pattern")
    plan = plan or make_plan(a.basis)
    symbol = (spectrum.coset_sums() * spectrum.basis.det).reshape(a.basis.shape)
    ahat = fft_pattern(a, plan)
    return ifft_pattern(LatticeArray(a.basis, ahat.values * symbol, "frequency"), plan)
