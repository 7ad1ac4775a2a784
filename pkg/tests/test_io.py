from fractions import Fraction as F

import numpy as np
import pytest

from patternfft import intlinalg as il
from patternfft import io as pio
from patternfft.dirichlet import J_D, dirichlet_bank
from patternfft.exceptions import PatternError, ShapeMismatch

from conftest import LATTICE_EXAMPLE


def test_parse_matrix_formats(tmp_path):
    assert pio.parse_matrix("[[4,-3],[4,5]]") == LATTICE_EXAMPLE
    assert pio.parse_matrix('{"M": [[4,-3],[4,5]]}') == LATTICE_EXAMPLE
    assert pio.parse_matrix("4 -3\n4, 5\n# comment\n") == LATTICE_EXAMPLE
    p = tmp_path / "m.txt"
    p.write_text("2 0\n0 3\n")
    assert pio.read_matrix(p) == il.diag(2, 3)
    assert pio.read_matrix("[[1]]") == ((1,),)
    with pytest.raises(PatternError):
        pio.parse_matrix("")
    with pytest.raises(PatternError):
        pio.parse_matrix("[[1, 2]]")


def test_complex_csv_roundtrip(tmp_path, rng):
    v = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    idx = np.arange(7)[:, None]
    p = pio.write_complex_csv(tmp_path / "v.csv", v, idx, ["lambda_1"])
    assert p.read_text().splitlines()[0] == "lambda_1,re,im"
    # repr floats round-trip bit for bit
    assert np.array_equal(pio.read_complex_csv(p), v)
    bare = tmp_path / "bare.csv"
    bare.write_text("1.5\n2\n")
    assert np.array_equal(pio.read_complex_csv(bare), [1.5, 2])
    pairs = tmp_path / "pairs.csv"
    pairs.write_text("1,2\n3,-4\n")
    assert np.array_equal(pio.read_complex_csv(pairs), [1 + 2j, 3 - 4j])


def test_pattern_and_generator_csv():
    text = pio.pattern_csv([(F(0), F(0)), (F(1, 32), F(3, 8))], np.array([[0], [1]]))
    assert text.splitlines() == ["lambda_1,x_1,x_2", "0,0,0", "1,1/32,3/8"]
    text = pio.generators_csv(np.array([[0, 0], [0, 1]]), np.array([[0], [1]]))
    assert text.splitlines()[2] == "1,0,1"


def test_filter_bank_json_roundtrip(tmp_path):
    fb = dirichlet_bank(il.diag(8, 8), J_D)
    p = pio.atomic_write(tmp_path / "f.json", pio.filter_bank_json(fb))
    back = pio.load_filter_bank(p)
    assert back.m_basis.matrix == fb.m_basis.matrix and back.j_basis.matrix == fb.j_basis.matrix
    assert np.array_equal(back.bhat, fb.bhat)
    bad = tmp_path / "bad.json"
    bad.write_text('{"M": [[2]]}')
    with pytest.raises(PatternError):
        pio.load_filter_bank(bad)


def test_pgm_roundtrip(tmp_path):
    # leading bytes that look like whitespace must survive
    img = np.array([[9, 10, 32], [13, 0, 255]], dtype=np.uint8)
    p = pio.write_pgm(tmp_path / "x.pgm", img)
    assert p.read_bytes().startswith(b"P5\n3 2\n255\n")
    assert np.array_equal(pio.read_pgm(p), img)
    with pytest.raises(ShapeMismatch):
        pio.pgm_bytes(np.zeros((2, 2)))


def test_atomic_write_leaves_no_temporaries(tmp_path):
    p = pio.atomic_write(tmp_path / "sub" / "a.txt", "hello")
    pio.atomic_write(p, b"world")
    assert p.read_text() == "world"
    assert [q.name for q in p.parent.iterdir()] == ["a.txt"]
    assert len(pio.sha256(p)) == 64
