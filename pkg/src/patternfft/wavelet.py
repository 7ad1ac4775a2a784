"""One level (and chains of levels) of the fast periodic wavelet transform.

For ``M = J N`` a function ``gamma = sum_y a_y T(y) f`` in V_M^f is split
into ``|det J|`` components over the coarser pattern P(N).  Each branch
``g_j`` is described by a frequency filter ``bhat_j`` on G(M^T) with
``c_k(g_j) = bhat_j[k mod M^T] * c_k(f)``.  With translate-orthonormal
``f`` and ``g_j`` (``bhat`` unitary up to ``sqrt|det J|`` on every coset),
analysis and synthesis are mutually inverse isometries.

Every frequency ``h`` of G(N^T) labels a coset ``h + N^T G(J^T)`` inside
G(M^T); in basis coordinates that coset is ``P mu + lambda_l`` (mod the M
cycle lengths) for the coset offsets ``lambda_l``, so the filtering is a
gather over precomputed flat indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import intlinalg as il
from .exceptions import BadFactorization, ShapeMismatch
from .fft import FourierPlan, LatticeArray, fft_pattern, ifft_pattern, make_plan
from .lattice import (
    PatternBasis,
    build_basis,
    generator_indices,
    generator_points,
    generator_projection_matrix,
    index_grid,
)


def _check_triple(j_basis: PatternBasis, n_basis: PatternBasis, m_basis: PatternBasis) -> None:
    if il.matmul(j_basis.matrix, n_basis.matrix) != m_basis.matrix:
        raise BadFactorization(
            f"J N = {il.matmul(j_basis.matrix, n_basis.matrix)} differs from M = {m_basis.matrix}"
        )


def coset_offsets(j_basis: PatternBasis, n_basis: PatternBasis, m_basis: PatternBasis) -> np.ndarray:
    """M-coordinates of ``N^T l`` for every ``l`` of G(J^T) in its mu-order.

    Returns an integer array of shape ``(|det J|, d_M)``.
    """
    _check_triple(j_basis, n_basis, m_basis)
    ls = generator_points(j_basis)
    nt = np.array(il.transpose(n_basis.matrix), dtype=np.int64)
    return generator_indices(ls @ nt.T, m_basis)


def factor(m, j) -> il.IntMatrix:
    """Right factor ``N = J^{-1} M``; raises ``BadFactorization`` if not integral."""
    m = il.as_int_matrix(m)
    j = il.as_int_matrix(j)
    if il.determinant(j) == 0:
        raise BadFactorization("J must be regular")
    n = il.matmul(il.inverse_rational(j), m)
    if not il.is_integral(n):
        raise BadFactorization(f"{j} is not a left factor of {m}")
    return tuple(tuple(int(v) for v in row) for row in n)


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Frequency filters ``bhat_j`` on G(M^T) for one split ``M = J N``.

    ``bhat`` has shape ``(|det J|,) + m_basis.shape``, mu-ordered.
    """

    m_basis: PatternBasis
    n_basis: PatternBasis
    j_basis: PatternBasis
    bhat: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_triple(self.j_basis, self.n_basis, self.m_basis)
        bhat = np.asarray(self.bhat, dtype=np.complex128)
        count = self.j_basis.det
        if bhat.size != count * self.m_basis.det:
            raise ShapeMismatch(
                f"need {count} filters of length {self.m_basis.det}, got array of shape {bhat.shape}"
            )
        object.__setattr__(self, "bhat", bhat.reshape((count,) + self.m_basis.shape))

    @property
    def branches(self) -> int:
        return self.j_basis.det

    @cached_property
    def offsets(self) -> np.ndarray:
        return coset_offsets(self.j_basis, self.n_basis, self.m_basis)

    @cached_property
    def projection(self) -> np.ndarray:
        return generator_projection_matrix(self.n_basis, self.m_basis)

    @cached_property
    def gather(self) -> np.ndarray:
        """Flat M indices, shape ``(|det J|, n)``: row ``l``, column ``mu`` -> ``P mu + lambda_l``."""
        mb = self.m_basis
        mu = index_grid(self.n_basis.cycle_lengths)
        if mb.d_m == 0:
            return np.zeros((self.branches, len(mu)), dtype=np.int64)
        eps = np.array(mb.cycle_lengths, dtype=np.int64)
        lam = mu @ self.projection.T
        idx = np.mod(lam[None, :, :] + self.offsets[:, None, :], eps)
        return np.ravel_multi_index(tuple(np.moveaxis(idx, -1, 0)), mb.cycle_lengths)

    @cached_property
    def _gathered(self) -> np.ndarray:
        flat = self.bhat.reshape(self.branches, -1)
        return flat[:, self.gather]  # (branch, coset member, mu)

    def coset_matrices(self) -> np.ndarray:
        """``(n, |det J|, |det J|)`` matrices ``bhat_j[coset l] / sqrt|det J|``."""
        return np.moveaxis(self._gathered, -1, 0) / np.sqrt(self.branches)

    def isometry_defect(self) -> float:
        """Largest deviation of the per-coset filter matrices from unitarity."""
        u = self.coset_matrices()
        eye = np.eye(self.branches)
        gram = np.einsum("nij,nkj->nik", u, u.conj())
        return float(np.max(np.abs(gram - eye)))


@dataclass
class WaveletCoefficients:
    """Branch arrays over P(N), all tagged with the same domain."""

    branches: list[LatticeArray]

    @property
    def domain(self) -> str:
        return self.branches[0].domain

    def energies(self) -> np.ndarray:
        return np.array([b.norm() ** 2 for b in self.branches])

    def stacked(self) -> np.ndarray:
        return np.stack([b.flat for b in self.branches])


def _check_frequency(ahat: LatticeArray, fb: FilterBank) -> None:
    if ahat.domain != "frequency":
        raise ShapeMismatch("decompose_step expects frequency data")
    if ahat.basis.matrix != fb.m_basis.matrix:
        raise ShapeMismatch(f"data lives on {ahat.basis.matrix}, filters on {fb.m_basis.matrix}")


def decompose_step(ahat: LatticeArray, fb: FilterBank) -> WaveletCoefficients:
    """Frequency-domain analysis of one level.

    Branch ``j`` at ``mu`` is ``|det J|^{-1/2} sum_l conj(bhat_j) * ahat`` over
    the coset addressed by ``P mu + lambda_l``.
    """
    _check_frequency(ahat, fb)
    data = ahat.flat[fb.gather]  # (coset member, mu)
    d = np.einsum("jln,ln->jn", fb._gathered.conj(), data) / np.sqrt(fb.branches)
    return WaveletCoefficients([LatticeArray(fb.n_basis, row, "frequency") for row in d])


def reconstruct_step(coeffs: WaveletCoefficients, fb: FilterBank) -> LatticeArray:
    """Adjoint of :func:`decompose_step`; its inverse for isometric filter banks."""
    if len(coeffs.branches) != fb.branches:
        raise ShapeMismatch(f"expected {fb.branches} branches, got {len(coeffs.branches)}")
    if coeffs.domain != "frequency":
        raise ShapeMismatch("reconstruct_step expects frequency data")
    for b in coeffs.branches:
        if b.basis.matrix != fb.n_basis.matrix:
            raise ShapeMismatch("branch does not live on P(N)")
    d = coeffs.stacked()
    members = np.einsum("jln,jn->ln", fb._gathered, d) / np.sqrt(fb.branches)
    out = np.empty(fb.m_basis.det, dtype=np.complex128)
    out[fb.gather] = members
    return LatticeArray(fb.m_basis, out, "frequency")


def full_analysis(
    a: LatticeArray, fb: FilterBank, plan: FourierPlan | None = None, n_plan: FourierPlan | None = None
) -> WaveletCoefficients:
    """FFT on P(M), one frequency split, inverse FFT of every branch on P(N)."""
    if a.domain != "spatial":
        raise ShapeMismatch("full_analysis expects spatial coefficients")
    ahat = fft_pattern(a, plan or make_plan(fb.m_basis))
    spec = decompose_step(ahat, fb)
    n_plan = n_plan or make_plan(fb.n_basis)
    return WaveletCoefficients([ifft_pattern(b, n_plan) for b in spec.branches])


def full_synthesis(
    coeffs: WaveletCoefficients, fb: FilterBank, plan: FourierPlan | None = None, n_plan: FourierPlan | None = None
) -> LatticeArray:
    n_plan = n_plan or make_plan(fb.n_basis)
    spec = WaveletCoefficients([fft_pattern(b, n_plan) for b in coeffs.branches])
    return ifft_pattern(reconstruct_step(spec, fb), plan or make_plan(fb.m_basis))


@dataclass
class WaveletTree:
    """Result of a multilevel analysis.

    ``details[k]`` holds the non-lowpass branches emitted at level ``k``;
    ``approximation`` is the lowpass branch of the last level.
    """

    details: list[list[LatticeArray]]
    approximation: LatticeArray

    def energy(self) -> float:
        total = self.approximation.norm() ** 2
        return total + sum(b.norm() ** 2 for level in self.details for b in level)

    def flatten(self) -> np.ndarray:
        parts = [b.flat for level in self.details for b in level]
        parts.append(self.approximation.flat)
        return np.concatenate(parts)


def _check_chain(chain: Sequence[FilterBank]) -> None:
    if not chain:
        raise BadFactorization("empty filter-bank chain")
    for prev, nxt in zip(chain[:-1], chain[1:]):
        if nxt.m_basis.matrix != prev.n_basis.matrix:
            raise BadFactorization(
                f"stage on {nxt.m_basis.matrix} does not factor the previous N = {prev.n_basis.matrix}"
            )


def multilevel(a: LatticeArray, chain: Sequence[FilterBank], lowpass: int = 0) -> WaveletTree:
    """Chain of splits on the lowpass branch, staying in the frequency domain.

    One FFT up front; each emitted branch gets exactly one inverse FFT.
    """
    _check_chain(chain)
    if a.basis.matrix != chain[0].m_basis.matrix:
        raise ShapeMismatch("input does not live on the first stage's pattern")
    current = fft_pattern(a, make_plan(a.basis))
    details = []
    for fb in chain:
        spec = decompose_step(current, fb)
        plan = make_plan(fb.n_basis)
        details.append(
            [ifft_pattern(b, plan) for i, b in enumerate(spec.branches) if i != lowpass]
        )
        current = spec.branches[lowpass]
    return WaveletTree(details, ifft_pattern(current, make_plan(current.basis)))


def multilevel_synthesis(tree: WaveletTree, chain: Sequence[FilterBank], lowpass: int = 0) -> LatticeArray:
    _check_chain(chain)
    current = fft_pattern(tree.approximation, make_plan(tree.approximation.basis))
    for fb, level in zip(reversed(chain), reversed(tree.details)):
        plan = make_plan(fb.n_basis)
        others = iter(fft_pattern(b, plan) for b in level)
        branches = [current if i == lowpass else next(others) for i in range(fb.branches)]
        current = reconstruct_step(WaveletCoefficients(branches), fb)
    return ifft_pattern(current, make_plan(current.basis))


def make_filter_bank(m, j, bhat, n=None) -> FilterBank:
    """Filter bank for ``M = J N`` from explicit filters (``N`` derived when omitted)."""
    m = il.as_int_matrix(m)
    j = il.as_int_matrix(j)
    n = factor(m, j) if n is None else il.as_int_matrix(n)
    return FilterBank(build_basis(m), build_basis(n), build_basis(j), np.asarray(bhat))
