from math import comb

import numpy as np
import pytest

from patternfft import intlinalg as il
from patternfft.boxspline import PSI, XI, DirectionSet, eval_box_spline, sample_on_pattern
from patternfft.exceptions import DegenerateDirections
from patternfft.lattice import build_basis, enumerate_pattern

from conftest import LATTICE_EXAMPLE
from oracles import psi_quadrature, xi_exact


def _pattern_points(m):
    return 2 * np.pi * np.array([[float(v) for v in p] for p in enumerate_pattern(build_basis(m), "centered")])


def test_xi_matches_exact_formula(rng):
    x = rng.uniform(-2.2, 2.2, size=(400, 2))
    ref = np.array([xi_exact(p) for p in x])
    # the evaluator steps 1e-10 off mesh lines, which moves values by ~1e-11
    assert np.abs(XI(x) - ref).max() < 1e-9


def test_psi_matches_quadrature(rng):
    x = rng.uniform(-2.2, 2.2, size=(300, 2))
    ref = np.array([psi_quadrature(p) for p in x])
    assert np.abs(PSI(x) - ref).max() < 1e-10


@pytest.mark.parametrize("ds, oracle", [(XI, xi_exact), (PSI, psi_quadrature)])
def test_lattice_samples_on_mesh_lines(ds, oracle):
    # pattern points of diag(16, 16) sit on mesh lines of both splines
    x = _pattern_points(il.diag(16, 16))
    ref = np.array([oracle(p) for p in x])
    assert np.abs(ds(x) - ref).max() < 1e-8
    assert ds(x).min() >= 0


@pytest.mark.parametrize("ds", [XI, PSI])
def test_unit_integral(ds):
    h = 0.01
    g = np.arange(-2.0, 2.0, h) + h / 2
    xx, yy = np.meshgrid(g, g)
    vals = ds(np.stack([xx, yy], axis=-1))
    assert abs(vals.sum() * h * h - 1) < 1e-3


@pytest.mark.parametrize("ds", [XI, PSI])
def test_symmetry_support_and_sign(rng, ds):
    x = rng.uniform(-2.5, 2.5, size=(500, 2))
    v = ds(x)
    assert np.abs(v - ds(-x)).max() < 1e-9
    assert v.min() >= 0
    radius = 0.5 * np.abs(ds.directions).sum(axis=1)
    outside = np.any(np.abs(x) > radius + 1e-9, axis=1)
    assert np.all(v[outside] == 0)
    assert ds(np.zeros(2)) > 0


def test_uncentered_is_a_shift(rng):
    x = rng.uniform(-1, 1, size=(50, 2))
    assert np.allclose(eval_box_spline(XI, x + XI.center, centered=False), XI(x), atol=1e-12)


@pytest.mark.parametrize("ds, order, tol", [(XI, 2, 1e-7), (PSI, 4, 1e-6)])
def test_piecewise_polynomial(rng, ds, order, tol):
    h = 1e-3
    coef = np.array([(-1) ** k * comb(order, k) for k in range(order + 1)], dtype=float)
    smooth = 0
    for _ in range(200):
        p = rng.uniform(-1.5, 1.5, size=2)
        u = rng.standard_normal(2)
        u /= np.linalg.norm(u)
        seg = p + h * np.arange(order + 1)[:, None] * u
        diff = coef @ ds(seg)
        if abs(diff) < tol:
            smooth += 1
    # segments of length 4e-3 rarely cross one of the finitely many mesh lines
    assert smooth >= 180


def test_xi_is_continuous_across_mesh_line():
    # the diagonal through the center is a mesh line of XI
    t = np.array([[0.3, 0.3 + e] for e in (-1e-9, 0.0, 1e-9)])
    v = XI(t)
    assert np.ptp(v) < 1e-7


def test_degenerate_directions():
    with pytest.raises(DegenerateDirections):
        DirectionSet(np.array([[1.0, 2.0, 0.0], [1.0, 2.0, 1.0]]))
    with pytest.raises(DegenerateDirections):
        DirectionSet(np.array([[1.0], [0.0]]))
    with pytest.raises(DegenerateDirections):
        DirectionSet(np.ones((3, 3)))


def test_two_direction_spline_is_a_box():
    ds = DirectionSet(np.eye(2))
    assert not ds.continuous
    assert eval_box_spline(ds, np.array([[0.2, 0.7]]), centered=False)[0] == 1
    assert eval_box_spline(ds, np.array([[1.0, 0.5]]), centered=False)[0] == 0
    assert eval_box_spline(ds, np.array([[0.0, 0.0]]), centered=False)[0] == 1


def test_sample_on_pattern():
    b = build_basis(il.diag(16, 16))
    zero = sample_on_pattern(None, b)
    assert zero.domain == "spatial" and np.all(zero.flat == 0)
    s = sample_on_pattern(XI, b)
    x = _pattern_points(il.diag(16, 16))
    assert np.allclose(s.flat, XI(x))
    # support of XI is the centered box of half-width 9 pi / 16, inside [-pi, pi)^2
    assert np.count_nonzero(s.flat) > 0
    assert np.all(s.flat[np.any(np.abs(x) > 9 * np.pi / 16 + 1e-9, axis=1)] == 0)
    s = sample_on_pattern(PSI, build_basis(LATTICE_EXAMPLE))
    assert s.flat.shape == (32,) and s.flat.real.min() >= 0


def test_support_geometry_diag_8_8():
    b = build_basis(il.diag(8, 8))
    s = sample_on_pattern(XI, b).flat.real
    x = _pattern_points(il.diag(8, 8))
    # the centered zonotope of XI lies in the box |x_i| <= 9 pi / 16 < pi
    inside = np.all(np.abs(x) <= 9 * np.pi / 16, axis=1)
    assert np.all(s[~inside] == 0)
    assert s[np.all(x == 0, axis=1)][0] > 0
    assert np.count_nonzero(s) < len(s) / 2
