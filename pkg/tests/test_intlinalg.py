from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patternfft import intlinalg as il
from patternfft.exceptions import PatternError, SingularMatrix

from conftest import LATTICE_EXAMPLE
from oracles import random_regular, random_unimodular


def test_determinant_examples():
    assert il.determinant(LATTICE_EXAMPLE) == 32
    assert il.determinant(il.identity(4)) == 1
    assert il.determinant([[2, 0], [0, 6]]) == 12
    assert il.determinant([[0, 1], [1, 0]]) == -1
    assert il.determinant([[1, 2], [2, 4]]) == 0


def test_determinant_matches_numpy(rng):
    for _ in range(200):
        m = random_regular(rng, int(rng.integers(1, 5)))
        assert il.determinant(m) == round(np.linalg.det(np.array(m, dtype=float)))


def test_inverse_examples():
    assert il.inverse_rational(il.identity(3)) == il.identity(3)
    expected = tuple(tuple(Fraction(v, 32) for v in row) for row in ((5, 3), (-4, 4)))
    assert il.inverse_rational(LATTICE_EXAMPLE) == expected
    assert il.inverse_rational([[1, -12], [0, 1]]) == ((1, 12), (0, 1))
    with pytest.raises(SingularMatrix):
        il.inverse_rational([[1, 2], [2, 4]])


def test_inverse_is_exact(rng):
    for _ in range(200):
        m = random_regular(rng, int(rng.integers(1, 4)))
        assert il.matmul(il.inverse_rational(m), m) == il.identity(len(m))


def test_adjugate_identity(rng):
    for _ in range(100):
        m = random_regular(rng, 3)
        det = il.determinant(m)
        assert il.matmul(m, il.adjugate(m)) == tuple(
            tuple(det if i == j else 0 for j in range(3)) for i in range(3)
        )


# elementary divisors frozen from an independent computer-algebra run
FROZEN_DIVISORS = {
    LATTICE_EXAMPLE: (1, 32),
    ((4, 0), (0, 6)): (2, 12),
    ((2, 4), (6, 8)): (2, 4),
    ((3, 1, 0), (0, 3, 1), (1, 0, 3)): (1, 1, 28),
    ((6, 4, 2), (2, 8, 6), (4, 2, 10)): (2, 2, 92),
    ((12, 18), (30, 42)): (6, 6),
}


@pytest.mark.parametrize("m, e", FROZEN_DIVISORS.items())
def test_smith_frozen(m, e):
    snf = il.smith_normal_form(m)
    snf.check(m)
    assert snf.e == e
    assert il.elementary_divisors_by_minors(m) == e


def test_smith_identity():
    snf = il.smith_normal_form(il.identity(3))
    assert snf.e == (1, 1, 1)
    assert snf.q == il.identity(3) and snf.r == il.identity(3)


def test_smith_singular():
    with pytest.raises(SingularMatrix):
        il.smith_normal_form([[1, 2], [2, 4]])


def test_smith_random_against_minors(rng):
    for _ in range(300):
        m = random_regular(rng, int(rng.integers(2, 4)), -20, 20)
        snf = il.smith_normal_form(m)
        snf.check(m)
        assert snf.e == il.elementary_divisors_by_minors(m)
        assert il.order(snf.e) == il.abs_det(m)


def test_smith_unimodular_invariance(rng):
    for _ in range(100):
        m = random_regular(rng, 3, -6, 6)
        u, v = random_unimodular(rng, 3), random_unimodular(rng, 3)
        assert il.smith_normal_form(il.matmul(il.matmul(u, m), v)).e == il.smith_normal_form(m).e


def test_smith_deterministic():
    assert il.smith_normal_form(LATTICE_EXAMPLE) == il.smith_normal_form(LATTICE_EXAMPLE)


def test_smith_large_entries_stay_exact():
    m = [[10**12 + 1, 3], [7, 10**12 - 5]]
    snf = il.smith_normal_form(m)
    snf.check(m)
    assert il.order(snf.e) == il.abs_det(m)


def test_as_int_matrix_rejects_bad_input():
    with pytest.raises(PatternError):
        il.as_int_matrix([[1, 2]])
    with pytest.raises(PatternError):
        il.as_int_matrix([[1.5, 0], [0, 1]])
    with pytest.raises(PatternError):
        il.integer_inverse([[2, 0], [0, 1]])


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-15, 15), min_size=4, max_size=4))
def test_smith_property_2x2(entries):
    m = [entries[:2], entries[2:]]
    if il.determinant(m) == 0:
        with pytest.raises(SingularMatrix):
            il.smith_normal_form(m)
        return
    snf = il.smith_normal_form(m)
    snf.check(m)
    assert snf.e[0] == abs(np.gcd.reduce(entries))
