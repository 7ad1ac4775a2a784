"""Directional wavelet demo: box-spline samples split by the three two-fold J."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intlinalg as il
from .boxspline import DIRECTION_SETS, DirectionSet, sample_on_pattern
from .dirichlet import J_D, J_X, J_Y, dirichlet_bank, dirichlet_spectrum, samples_to_translate_coeffs, translate_coeffs_to_samples
from .fft import LatticeArray
from .lattice import pattern_numerators
from .wavelet import FilterBank, WaveletCoefficients, full_analysis, full_synthesis

SPLITS = {"x": J_X, "y": J_Y, "d": J_D}


@dataclass
class DemoResult:
    bank: FilterBank
    samples: LatticeArray  # f(2 pi y) on P(M)
    coeffs: LatticeArray  # a with f = sum a_y T(y) phi_M
    branches: WaveletCoefficients  # spatial, over P(N)
    coeffs_v: LatticeArray  # translate coefficients of f_V
    coeffs_w: LatticeArray  # translate coefficients of f_W
    samples_w: LatticeArray  # f_W(2 pi y)

    @property
    def energies(self) -> np.ndarray:
        """Branch energies relative to the total."""
        e = self.branches.energies()
        return e / e.sum()

    @property
    def reconstruction_error(self) -> float:
        """``max |a - (a_V + a_W)|`` relative to ``max |a|``."""
        diff = self.coeffs.flat - self.coeffs_v.flat - self.coeffs_w.flat
        return float(np.max(np.abs(diff)) / np.max(np.abs(self.coeffs.flat)))


def _keep(branches: WaveletCoefficients, index: int) -> WaveletCoefficients:
    kept = [
        b if i == index else LatticeArray(b.basis, np.zeros_like(b.values), b.domain)
        for i, b in enumerate(branches.branches)
    ]
    return WaveletCoefficients(kept)


def run_demo(ds: DirectionSet | str, m, j) -> DemoResult:
    """Sample ``ds`` on P(M), interpolate by Dirichlet translates and split once by ``J``."""
    if isinstance(ds, str):
        ds = DIRECTION_SETS[ds]
    if isinstance(j, str):
        j = SPLITS[j]
    m = il.as_int_matrix(m)
    bank = dirichlet_bank(m, j)
    basis = bank.m_basis
    samples = sample_on_pattern(ds, basis, "centered")
    spectrum = dirichlet_spectrum(basis)
    coeffs = samples_to_translate_coeffs(samples, spectrum)
    branches = full_analysis(coeffs, bank)
    coeffs_v = full_synthesis(_keep(branches, 0), bank)
    coeffs_w = full_synthesis(_keep(branches, 1), bank)
    samples_w = translate_coeffs_to_samples(coeffs_w, spectrum)
    return DemoResult(bank, samples, coeffs, branches, coeffs_v, coeffs_w, samples_w)


def raster(values: LatticeArray, resolution: int | None = None) -> np.ndarray:
    """Place ``|values|`` of the centered-window pattern points on a square pixel grid.

    Pixel ``(row, col)`` covers ``x_2`` (top = largest) and ``x_1`` (left =
    smallest) of the window ``[-1/2, 1/2)^2``; for diagonal ``M = diag(n, n)``
    and ``resolution = n`` every pixel holds exactly one point.
    """
    basis = values.basis
    if basis.dim != 2:
        raise ValueError("raster needs a two-dimensional pattern")
    if resolution is None:
        resolution = int(round(np.sqrt(basis.det)))
    num, den = pattern_numerators(basis, "centered")
    pos = np.floor_divide((2 * num + den) * resolution, 2 * den)
    img = np.zeros((resolution, resolution))
    mag = np.abs(values.flat)
    np.maximum.at(img, (resolution - 1 - pos[:, 1], pos[:, 0]), mag)
    return img


def to_gray(img: np.ndarray) -> np.ndarray:
    """8-bit grey levels: white for zero, black for the largest magnitude."""
    top = img.max()
    scaled = img / top if top > 0 else img
    return np.round(255 * (1 - scaled)).astype(np.uint8)
