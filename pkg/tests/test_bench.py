import numpy as np
import pytest

from patternfft.bench import complexity_exponent, normal_form, rows_csv, run_bench, scaling_series, time_fft
from patternfft.exceptions import PatternError
from patternfft.lattice import build_basis


@pytest.mark.parametrize(
    "m, i, cycles",
    [(2**20, 0, (1024, 1024)), (2**20, 1, (2**20,)), (2**20, 4, (4, 2**18)), (2**12, 0, (64, 64)), (2**13, 0, (64, 128))],
)
def test_normal_form_cycles(m, i, cycles):
    b = build_basis(normal_form(m, i))
    assert b.det == m and b.cycle_lengths == cycles


def test_normal_form_range():
    with pytest.raises(PatternError):
        normal_form(16, 4)
    with pytest.raises(PatternError):
        normal_form(0, 0)


def test_complexity_exponent_recovers_synthetic_law():
    ms = 2.0 ** np.arange(12, 21)
    assert abs(complexity_exponent(ms, 3e-9 * ms * np.log(ms)) - 1) < 1e-12
    assert abs(complexity_exponent(ms, ms**1.5) - (1.5 - 0)) < 0.1


def test_timing_rows():
    row = time_fft(1024, 1, reps=2, threads=2)
    assert row.cycles == (1024,) and row.serial_seconds > 0 and row.speedup > 0
    text = rows_csv(run_bench(256, [0, 1], reps=1, threads=2))
    assert text.splitlines()[1].startswith("0,(16 16),")
    ms, secs = scaling_series(0, exponents=range(8, 11), reps=1)
    assert ms == [256, 512, 1024] and all(s > 0 for s in secs)
