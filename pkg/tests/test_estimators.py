import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from patternfft import DirichletInterpolator, PatternFFT, PatternWaveletTransform
from patternfft.exceptions import PatternError, SingularMatrix
from patternfft.fft import LatticeArray, dft_naive
from patternfft.lattice import build_basis

from conftest import LATTICE_EXAMPLE


def _rows(rng, k, m):
    return rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))


def test_pattern_fft_rows_match_oracle(rng):
    X = _rows(rng, 4, 32)
    est = PatternFFT(matrix=LATTICE_EXAMPLE).fit()
    Y = est.transform(X)
    b = build_basis(LATTICE_EXAMPLE)
    for x, y in zip(X, Y):
        assert np.abs(dft_naive(LatticeArray(b, x)).flat - y).max() < 1e-12
    assert np.abs(est.inverse_transform(Y) - X).max() < 1e-12


def test_pattern_fft_two_cycles_and_engines(rng):
    X = _rows(rng, 3, 48)
    a = PatternFFT(matrix=((4, 0), (0, 12)), engine="native", workers=2).fit_transform(X)
    b = PatternFFT(matrix=((4, 0), (0, 12))).fit_transform(X)
    assert np.abs(a - b).max() < 1e-12


def test_wavelet_transform_is_unitary(rng):
    est = PatternWaveletTransform(matrix=((8, 0), (0, 8)), factors=(((2, 0), (0, 1)), ((1, 1), (-1, 1))))
    X = _rows(rng, 3, 64)
    Y = est.fit_transform(X)
    assert Y.shape == X.shape
    assert np.allclose(np.linalg.norm(Y, axis=1), np.linalg.norm(X, axis=1), rtol=1e-12)
    assert np.abs(est.inverse_transform(Y) - X).max() < 1e-12


def test_interpolator_roundtrip(rng):
    est = DirichletInterpolator(matrix=LATTICE_EXAMPLE).fit()
    X = _rows(rng, 2, 32)
    assert np.abs(est.inverse_transform(est.transform(X)) - X).max() < 1e-10


def test_sklearn_protocol(rng):
    est = PatternFFT(matrix=((2, 0), (0, 2)))
    assert clone(est).get_params()["matrix"] == ((2, 0), (0, 2))
    with pytest.raises(NotFittedError):
        est.transform(np.zeros((1, 4)))
    pipe = make_pipeline(PatternFFT(matrix=((2, 0), (0, 2))))
    X = _rows(rng, 2, 4)
    assert pipe.fit_transform(X).shape == (2, 4)


def test_input_validation():
    with pytest.raises(SingularMatrix):
        PatternFFT(matrix=((1, 1), (1, 1))).fit()
    est = PatternFFT(matrix=((2, 0), (0, 2))).fit()
    with pytest.raises(PatternError):
        est.transform(np.zeros((1, 5)))
    with pytest.raises(PatternError):
        est.transform(np.full((1, 4), np.nan))
    with pytest.raises(ValueError):
        PatternWaveletTransform(factors=()).fit()
