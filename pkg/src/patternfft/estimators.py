"""scikit-learn style wrappers.

Each row of ``X`` holds the ``m = |det M|`` values of one signal on the
pattern (lambda-order); transforms act row by row.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import intlinalg as il
from .dirichlet import dirichlet_spectrum, dyadic_chain, samples_to_translate_coeffs, translate_coeffs_to_samples
from .fft import LatticeArray, fft_values, make_plan
from .lattice import build_basis
from .validation import check_matrix, check_samples
from .wavelet import WaveletTree, multilevel, multilevel_synthesis


class PatternFFT(TransformerMixin, BaseEstimator):
    """Unitary Fourier transform on the pattern of ``matrix``."""

    def __init__(self, matrix=((1,),), workers=1, engine="pocketfft"):
        self.matrix = matrix
        self.workers = workers
        self.engine = engine

    def fit(self, X=None, y=None):
        self.basis_ = build_basis(check_matrix(self.matrix))
        self.plan_ = make_plan(self.basis_, workers=self.workers, engine=self.engine)
        self.n_features_in_ = self.basis_.det
        return self

    def _apply(self, X, inverse):
        check_is_fitted(self, "plan_")
        X = check_samples(X, self.n_features_in_)
        batch = X.T.reshape(self.basis_.shape + (len(X),))
        out = fft_values(batch, self.plan_, inverse=inverse)
        return out.reshape(self.n_features_in_, len(X)).T

    def transform(self, X):
        """Spectra in mu-order, one row per signal."""
        return self._apply(X, inverse=False)

    def inverse_transform(self, X):
        return self._apply(X, inverse=True)


class PatternWaveletTransform(TransformerMixin, BaseEstimator):
    """Multilevel Dirichlet wavelet transform.

    ``factors`` lists the splits ``J_1, J_2, ...`` (each ``|det J| = 2``).
    Output rows concatenate the detail branches level by level, followed by
    the final approximation, so the length stays ``m`` and the map is unitary.
    """

    def __init__(self, matrix=((2, 0), (0, 2)), factors=(((2, 0), (0, 1)),)):
        self.matrix = matrix
        self.factors = factors

    def fit(self, X=None, y=None):
        m = check_matrix(self.matrix)
        if not self.factors:
            raise ValueError("at least one factor is required")
        self.chain_ = dyadic_chain(m, [check_matrix(j, "factor") for j in self.factors])
        self.n_features_in_ = il.abs_det(m)
        return self

    def transform(self, X):
        check_is_fitted(self, "chain_")
        X = check_samples(X, self.n_features_in_)
        basis = self.chain_[0].m_basis
        return np.stack([multilevel(LatticeArray(basis, row), self.chain_).flatten() for row in X])

    def _unflatten(self, row) -> WaveletTree:
        details, pos = [], 0
        for fb in self.chain_:
            n = fb.n_basis.det
            level = []
            for _ in range(fb.branches - 1):
                level.append(LatticeArray(fb.n_basis, row[pos : pos + n]))
                pos += n
            details.append(level)
        last = self.chain_[-1].n_basis
        return WaveletTree(details, LatticeArray(last, row[pos : pos + last.det]))

    def inverse_transform(self, X):
        check_is_fitted(self, "chain_")
        X = check_samples(X, self.n_features_in_)
        return np.stack([multilevel_synthesis(self._unflatten(row), self.chain_).flat for row in X])


class DirichletInterpolator(TransformerMixin, BaseEstimator):
    """Point samples on the pattern to coefficients of Dirichlet-kernel translates."""

    def __init__(self, matrix=((1,),)):
        self.matrix = matrix

    def fit(self, X=None, y=None):
        self.basis_ = build_basis(check_matrix(self.matrix))
        self.spectrum_ = dirichlet_spectrum(self.basis_)
        self.n_features_in_ = self.basis_.det
        return self

    def transform(self, X):
        check_is_fitted(self, "spectrum_")
        X = check_samples(X, self.n_features_in_)
        return np.stack(
            [samples_to_translate_coeffs(LatticeArray(self.basis_, row), self.spectrum_).flat for row in X]
        )

    def inverse_transform(self, X):
        check_is_fitted(self, "spectrum_")
        X = check_samples(X, self.n_features_in_)
        return np.stack(
            [translate_coeffs_to_samples(LatticeArray(self.basis_, row), self.spectrum_).flat for row in X]
        )
