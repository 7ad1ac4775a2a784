import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patternfft import intlinalg as il
from patternfft.exceptions import ShapeMismatch, TooLarge
from patternfft.fft import (
    LatticeArray,
    assert_kronecker_structure,
    cyclic_fourier_matrix,
    dft_naive,
    fft_1d,
    fft_pattern,
    fft_values,
    fourier_matrix,
    idft_naive,
    ifft_pattern,
    kronecker_reference,
    make_plan,
    pattern_convolve,
)
from patternfft.lattice import build_basis, enumerate_generators, enumerate_pattern

from conftest import LATTICE_EXAMPLE
from oracles import dft_direct, fourier_from_points, kron_all, random_regular


def _random(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 12, 31, 32, 49, 97, 120, 127, 210, 257])
def test_fft_1d_against_direct(rng, n):
    v = _random(rng, n)
    assert np.allclose(fft_1d(v), dft_direct(v), atol=1e-11, rtol=0)


def test_fft_1d_examples():
    assert np.allclose(fft_1d([3.0 + 1j]), [3.0 + 1j])
    imp = np.zeros(32)
    imp[0] = 1
    assert np.allclose(fft_1d(imp), np.full(32, 32**-0.5))


def test_fft_1d_large_prime_matches_numpy(rng):
    v = _random(rng, 1009)
    assert np.allclose(fft_1d(v), np.fft.fft(v, norm="ortho"), atol=1e-11)


def test_fourier_matrix_small_cases():
    assert np.allclose(fourier_matrix(build_basis([[1]])), [[1]])
    assert np.allclose(fourier_matrix(build_basis([[2]])), np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def test_fourier_matrix_against_point_lists(rng):
    for m in [LATTICE_EXAMPLE, il.diag(2, 4), ((3, 1), (-2, 5)), ((2, 1, 0), (0, 2, 1), (1, 0, 2))]:
        b = build_basis(m)
        ref = fourier_from_points(enumerate_generators(b), enumerate_pattern(b))
        f = fourier_matrix(b)
        assert np.abs(f - ref).max() < 1e-12
        assert np.abs(f @ f.conj().T - np.eye(b.det)).max() < 1e-12


def test_kronecker_structure():
    assert assert_kronecker_structure(build_basis(il.identity(2)))
    b = build_basis(il.diag(2, 4))
    assert np.abs(fourier_matrix(b) - kron_all([dft_direct(np.eye(2)), dft_direct(np.eye(4))])).max() < 1e-12
    b = build_basis(LATTICE_EXAMPLE)
    assert np.abs(fourier_matrix(b) - cyclic_fourier_matrix(32)).max() < 1e-12
    assert np.abs(kronecker_reference(b) - dft_direct(np.eye(32))).max() < 1e-12


def test_dense_limit():
    with pytest.raises(TooLarge):
        fourier_matrix(build_basis(il.diag(65, 64)))
    with pytest.raises(TooLarge):
        fourier_matrix(build_basis(LATTICE_EXAMPLE), limit=16)


def test_impulse_and_constant():
    b = build_basis(il.diag(2, 2))
    a = LatticeArray(b, [1, 0, 0, 0])
    assert np.allclose(fft_pattern(a).flat, 0.5)
    assert np.allclose(dft_naive(a).flat, 0.5)
    ones = LatticeArray(b, np.ones(4))
    expected = np.zeros(4)
    expected[0] = 2
    assert np.allclose(fft_pattern(ones).flat, expected)
    delta = LatticeArray(b, [1, 0, 0, 0], "frequency")
    assert np.allclose(ifft_pattern(delta).flat, 0.5)


def test_trivial_pattern_is_identity():
    b = build_basis(((2, 1), (1, 1)))
    a = LatticeArray(b, [2 - 1j])
    assert fft_pattern(a).flat[0] == 2 - 1j


@pytest.mark.parametrize("engine", ["pocketfft", "native"])
@pytest.mark.parametrize("workers", [1, 3])
def test_fast_matches_oracle(rng, engine, workers):
    for _ in range(25):
        b = build_basis(random_regular(rng, int(rng.integers(2, 4)), -8, 8, max_det=512))
        a = LatticeArray(b, _random(rng, b.det))
        plan = make_plan(b, workers=workers, engine=engine)
        fast = fft_pattern(a, plan).flat
        slow = dft_naive(a).flat
        assert np.linalg.norm(fast - slow) <= 1e-10 * np.linalg.norm(slow)
        assert abs(np.linalg.norm(fast) - a.norm()) <= 1e-10 * a.norm()
        back = ifft_pattern(LatticeArray(b, fast, "frequency"), plan).flat
        assert np.linalg.norm(back - a.flat) <= 1e-10 * a.norm()
        assert np.allclose(idft_naive(LatticeArray(b, slow, "frequency")).flat, a.flat, atol=1e-10)


def test_parallel_schedule_does_not_change_result(rng):
    b = build_basis(il.diag(16, 48))
    x = _random(rng, b.det).reshape(b.shape)
    ref = fft_values(x, make_plan(b, workers=1))
    for w in (2, 3, 5, 8):
        assert np.abs(fft_values(x, make_plan(b, workers=w)) - ref).max() < 1e-12


def test_batched_values(rng):
    b = build_basis(il.diag(4, 6))
    x = _random(rng, b.det * 3).reshape(b.shape + (3,))
    out = fft_values(x, make_plan(b))
    for k in range(3):
        assert np.allclose(out[..., k], fft_pattern(LatticeArray(b, x[..., k])).values)


def test_linearity(rng):
    b = build_basis(LATTICE_EXAMPLE)
    x, y = _random(rng, 32), _random(rng, 32)
    alpha, beta = 2 - 1j, 0.5j
    lhs = ifft_pattern(LatticeArray(b, alpha * x + beta * y, "frequency")).flat
    rhs = alpha * ifft_pattern(LatticeArray(b, x, "frequency")).flat + beta * ifft_pattern(
        LatticeArray(b, y, "frequency")
    ).flat
    assert np.abs(lhs - rhs).max() < 1e-12


def test_convolution_theorem(rng):
    for m in [il.diag(4, 4), LATTICE_EXAMPLE, ((3, 1), (1, 5))]:
        b = build_basis(m)
        a, c = LatticeArray(b, _random(rng, b.det)), LatticeArray(b, _random(rng, b.det))
        lhs = fft_pattern(pattern_convolve(a, c)).flat
        rhs = np.sqrt(b.det) * fft_pattern(a).flat * fft_pattern(c).flat
        assert np.abs(lhs - rhs).max() < 1e-10


def test_shape_and_domain_errors(rng):
    b = build_basis(il.diag(2, 2))
    with pytest.raises(ShapeMismatch):
        LatticeArray(b, np.zeros(5))
    with pytest.raises(ShapeMismatch):
        fft_pattern(LatticeArray(b, np.zeros(4), "frequency"))
    with pytest.raises(ShapeMismatch):
        fft_pattern(LatticeArray(b, np.zeros(4)), make_plan(build_basis(il.diag(4, 1))))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-7, 7), min_size=4, max_size=4), st.integers(0, 2**32 - 1))
def test_parseval_property(entries, seed):
    m = [entries[:2], entries[2:]]
    if il.determinant(m) == 0:
        return
    b = build_basis(m)
    a = LatticeArray(b, _random(np.random.default_rng(seed), b.det))
    assert abs(fft_pattern(a).norm() - a.norm()) <= 1e-10 * max(a.norm(), 1)
