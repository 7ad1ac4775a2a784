"""Timing harness for the pattern FFT on two-dimensional normal forms.

Every pattern with ``m`` points in the plane is induced by some upper
triangular ``[[l, i], [0, k]]`` with ``l k = m`` and ``0 <= i < k``.  With
``k`` the smallest divisor of ``m`` not below ``sqrt(m)``, ``i = 0`` gives
two cycles of (nearly) equal length, ``i = 1`` a single cycle of length
``m``, and ``i = 2^s`` dividing ``l`` the cycles ``(i, m / i)``.
"""
from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import asdict, dataclass
from math import isqrt

import numpy as np

from .exceptions import PatternError
from .fft import fft_values, make_plan
from .lattice import build_basis


def normal_form(m: int, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
    if m < 1:
        raise PatternError("m must be positive")
    k = next(k for k in range(isqrt(m), m + 1) if m % k == 0 and k * k >= m)
    if not 0 <= i < k:
        raise PatternError(f"shape parameter {i} must satisfy 0 <= i < {k}")
    return ((m // k, i), (0, k))


@dataclass
class BenchRow:
    i: int
    cycles: tuple[int, ...]
    serial_seconds: float
    parallel_seconds: float
    speedup: float


def _mean_time(fn, reps: int) -> float:
    fn()  # warm caches and thread pools
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.mean(times))


def time_fft(m: int, i: int, reps: int = 50, threads: int | None = None, engine: str = "pocketfft", seed: int = 0) -> BenchRow:
    """Mean serial and parallel runtimes of one transform of random data."""
    threads = threads or os.cpu_count() or 1
    basis = build_basis(normal_form(m, i))
    rng = np.random.default_rng(seed)
    x = (rng.standard_normal(m) + 1j * rng.standard_normal(m)).reshape(basis.shape)
    serial = make_plan(basis, workers=1, engine=engine)
    parallel = make_plan(basis, workers=threads, engine=engine)
    ts = _mean_time(lambda: fft_values(x, serial), reps)
    tp = _mean_time(lambda: fft_values(x, parallel), reps)
    return BenchRow(i, basis.cycle_lengths, ts, tp, ts / tp)


def run_bench(m: int, shapes, reps: int = 50, threads: int | None = None, engine: str = "pocketfft", seed: int = 0) -> list[BenchRow]:
    return [time_fft(m, i, reps, threads, engine, seed) for i in shapes]


def rows_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "cycles", "serial_seconds", "parallel_seconds", "speedup"])
    for r in rows:
        d = asdict(r)
        d["cycles"] = "(" + " ".join(str(c) for c in r.cycles) + ")"
        w.writerow([d["i"], d["cycles"], repr(r.serial_seconds), repr(r.parallel_seconds), repr(r.speedup)])
    return buf.getvalue()


def complexity_exponent(ms, seconds) -> float:
    """Slope of ``log(t / log m)`` against ``log m``; about 1 for ``m log m`` cost."""
    ms = np.asarray(ms, dtype=float)
    t = np.asarray(seconds, dtype=float) / np.log(ms)
    slope, _ = np.polyfit(np.log(ms), np.log(t), 1)
    return float(slope)


def scaling_series(i: int, exponents=range(12, 21), reps: int = 5, engine: str = "pocketfft", seed: int = 0):
    """Best-of-``reps`` serial runtimes of shape ``i`` for ``m = 2^e``; returns ``(ms, seconds)``."""
    ms, secs = [], []
    rng = np.random.default_rng(seed)
    for e in exponents:
        m = 2**e
        basis = build_basis(normal_form(m, i))
        plan = make_plan(basis, workers=1, engine=engine)
        x = (rng.standard_normal(m) + 1j * rng.standard_normal(m)).reshape(basis.shape)
        ms.append(m)
        secs.append(_best_of(lambda: fft_values(x, plan), reps))
    return ms, secs


def _best_of(fn, reps: int) -> float:
    fn()
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return float(best)
