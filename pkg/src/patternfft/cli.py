"""Command-line interface: ``patternfft <subcommand> ...``.

Exit status 0 on success, 2 for usage errors (argparse), 1 when an input
violates a mathematical precondition or a numerical check fails.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import intlinalg as il
from . import io as pio
from .exceptions import PatternError
from .lattice import (
    WINDOWS,
    build_basis,
    enumerate_pattern,
    generator_points,
    index_grid,
)

CONTRACT_TOL = 1e-9


class ContractViolation(PatternError):
    """A computed result failed its built-in numerical check."""


class Run:
    """Collects inputs, outputs and timings for the summary JSON."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.timings: dict[str, float] = {}
        self.results: dict = {}

    def read(self, path) -> Path:
        p = Path(path)
        if p.is_file():
            self.inputs[str(p)] = pio.sha256(p)
        return p

    def write(self, path, data: bytes | str) -> Path:
        p = pio.atomic_write(path, data)
        self.outputs[str(p)] = pio.sha256(p)
        return p

    def timed(self, label, fn, *a, **kw):
        t0 = time.perf_counter()
        out = fn(*a, **kw)
        self.timings[label] = time.perf_counter() - t0
        return out

    def matrix(self, source) -> il.IntMatrix:
        self.read(source)
        return pio.read_matrix(source)

    def summary(self) -> dict:
        config = {k: v for k, v in vars(self.args).items() if k != "func"}
        return {
            "command": self.args.command,
            "version": __version__,
            "config": config,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "results": self.results,
            "timings": self.timings,
        }


def _out(run: Run, path, text: str) -> None:
    if path:
        run.write(path, text)
    else:
        sys.stdout.write(text)


def _random_input(m: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal(m) + 1j * rng.standard_normal(m)


def _load_values(run: Run, path, m: int, seed: int) -> np.ndarray:
    if path is None:
        return _random_input(m, seed)
    values = pio.read_complex_csv(run.read(path))
    if values.size != m:
        raise PatternError(f"{path} holds {values.size} values, the pattern has {m}")
    return values


# subcommands -------------------------------------------------------------------
def cmd_snf(run: Run) -> None:
    m = run.matrix(run.args.matrix)
    snf = run.timed("snf", il.smith_normal_form, m)
    snf.check(m)
    run.results = {"Q": snf.q, "E": snf.e, "R": snf.r}
    lines = [
        f"E = diag({', '.join(map(str, snf.e))})",
        f"Q = {pio.format_matrix(snf.q)}",
        f"R = {pio.format_matrix(snf.r)}",
    ]
    _out(run, run.args.output, "\n".join(lines) + "\n")


def cmd_pattern(run: Run) -> None:
    basis = build_basis(run.matrix(run.args.matrix))
    points = run.timed("enumerate", enumerate_pattern, basis, run.args.window)
    run.results = {"det": basis.det, "cycle_lengths": basis.cycle_lengths}
    _out(run, run.args.output, pio.pattern_csv(points, index_grid(basis.cycle_lengths)))


def cmd_generators(run: Run) -> None:
    basis = build_basis(run.matrix(run.args.matrix))
    points = run.timed("enumerate", generator_points, basis)
    run.results = {"det": basis.det, "cycle_lengths": basis.cycle_lengths}
    _out(run, run.args.output, pio.generators_csv(points, index_grid(basis.cycle_lengths)))


def cmd_fft(run: Run) -> None:
    from .fft import LatticeArray, dft_naive, fft_pattern, idft_naive, ifft_pattern, make_plan

    args = run.args
    basis = build_basis(run.matrix(args.matrix))
    values = _load_values(run, args.input, basis.det, args.seed)
    domain = "frequency" if args.inverse else "spatial"
    a = LatticeArray(basis, values, domain)
    if args.oracle:
        fn = idft_naive if args.inverse else dft_naive
        out = run.timed("transform", fn, a, args.dense_limit)
    else:
        plan = make_plan(basis, workers=args.threads)
        fn = ifft_pattern if args.inverse else fft_pattern
        out = run.timed("transform", fn, a, plan)
    ratio = out.norm() / a.norm() if a.norm() else 1.0
    if abs(ratio - 1) > CONTRACT_TOL:
        raise ContractViolation(f"transform changed the norm by a factor {ratio}")
    names = [f"{'lambda' if args.inverse else 'mu'}_{i + 1}" for i in range(basis.d_m)]
    run.results = {"det": basis.det, "cycle_lengths": basis.cycle_lengths, "norm": out.norm()}
    _out(run, args.output, pio.complex_csv(out.flat, index_grid(basis.cycle_lengths), names))


def cmd_bench(run: Run) -> None:
    from .bench import normal_form, rows_csv, run_bench

    args = run.args
    shapes = args.shape
    if not shapes:
        k = normal_form(args.m, 0)[1][1]
        shapes = [0] + [2**s for s in range(0, k.bit_length()) if 2**s < k and args.m // k % 2**s == 0]
    rows = run.timed("bench", run_bench, args.m, shapes, args.reps, args.threads, args.engine, args.seed)
    run.results = {"rows": [r.__dict__ for r in rows]}
    _out(run, args.output, rows_csv(rows))


def cmd_dirichlet(run: Run) -> None:
    from .dirichlet import dirichlet_spectrum, filter_bank_from_dirichlet, wavelet_spectrum
    from .wavelet import factor

    args = run.args
    m = run.matrix(args.matrix)
    basis = build_basis(m)
    outdir = Path(args.output_dir)
    phi = run.timed("phi", dirichlet_spectrum, basis)
    energy = phi.coset_energy() * basis.det
    if np.max(np.abs(energy - 1)) > CONTRACT_TOL:
        raise ContractViolation("coset energies of the kernel are not 1/m")
    run.write(outdir / "phi.csv", pio.spectrum_csv(phi.support, phi.values))
    run.results = {"det": basis.det, "support": len(phi.support)}
    if args.factor_j:
        j = run.matrix(args.factor_j)
        n_basis = build_basis(factor(m, j))
        j_basis = build_basis(j)
        psi = run.timed("psi", wavelet_spectrum, basis, n_basis, j_basis)
        fb = filter_bank_from_dirichlet(basis, n_basis, j_basis)
        defect = fb.isometry_defect()
        if defect > CONTRACT_TOL:
            raise ContractViolation(f"filter bank is not isometric (defect {defect})")
        run.write(outdir / "psi.csv", pio.spectrum_csv(psi.support, psi.values))
        run.write(outdir / "filters.json", pio.filter_bank_json(fb))
        run.results.update(N=n_basis.matrix, isometry_defect=defect)


def _chain(run: Run, m):
    from .dirichlet import dyadic_chain

    args = run.args
    if args.filters == "dirichlet":
        if not args.factor_j:
            raise PatternError("--factor-j is required with dirichlet filters")
        return dyadic_chain(m, [run.matrix(j) for j in args.factor_j])
    fb = pio.load_filter_bank(run.read(args.filters))
    if fb.m_basis.matrix != m:
        raise PatternError(f"filter bank is for {fb.m_basis.matrix}, not {m}")
    return [fb]


def cmd_wavedec(run: Run) -> None:
    from .fft import LatticeArray
    from .wavelet import multilevel, multilevel_synthesis

    args = run.args
    m = run.matrix(args.matrix)
    chain = _chain(run, m)
    basis = chain[0].m_basis
    a = LatticeArray(basis, _load_values(run, args.input, basis.det, args.seed))
    tree = run.timed("analysis", multilevel, a, chain)
    back = run.timed("synthesis", multilevel_synthesis, tree, chain)
    scale = max(a.norm(), 1e-300)
    energy_err = abs(tree.energy() - a.norm() ** 2) / scale**2
    recon_err = float(np.max(np.abs(back.flat - a.flat))) / scale
    if max(energy_err, recon_err) > CONTRACT_TOL:
        raise ContractViolation(f"energy error {energy_err:.3g}, reconstruction error {recon_err:.3g}")
    outdir = Path(args.output_dir)
    energies = []
    for level, (fb, branches) in enumerate(zip(chain, tree.details), start=1):
        names = [f"lambda_{i + 1}" for i in range(fb.n_basis.d_m)]
        for b, branch in enumerate(branches, start=2):
            run.write(outdir / f"level{level}_branch{b}.csv", pio.complex_csv(branch.flat, index_grid(fb.n_basis.cycle_lengths), names))
            energies.append(branch.norm() ** 2)
    last = tree.approximation
    names = [f"lambda_{i + 1}" for i in range(last.basis.d_m)]
    run.write(outdir / "approximation.csv", pio.complex_csv(last.flat, index_grid(last.basis.cycle_lengths), names))
    run.results = {
        "levels": len(chain),
        "detail_energies": energies,
        "approximation_energy": last.norm() ** 2,
        "energy_error": energy_err,
        "reconstruction_error": recon_err,
    }


def cmd_demo(run: Run) -> None:
    from .demo import raster, run_demo, to_gray

    args = run.args
    m = run.matrix(args.matrix)
    res = run.timed("demo", run_demo, args.which, m, args.j)
    if res.reconstruction_error > CONTRACT_TOL:
        raise ContractViolation(f"f_V + f_W misses f by {res.reconstruction_error:.3g}")
    outdir = Path(args.output_dir)
    basis = res.bank.m_basis
    lam_names = [f"lambda_{i + 1}" for i in range(basis.d_m)]
    run.write(outdir / "samples.csv", pio.complex_csv(res.samples.flat, index_grid(basis.cycle_lengths), lam_names))
    nb = res.bank.n_basis
    n_names = [f"lambda_{i + 1}" for i in range(nb.d_m)]
    for b, branch in enumerate(res.branches.branches, start=1):
        run.write(outdir / f"branch{b}.csv", pio.complex_csv(branch.flat, index_grid(nb.cycle_lengths), n_names))
    img = raster(res.samples_w, args.resolution)
    run.write(outdir / f"fw_{args.which}_{args.j}.pgm", pio.pgm_bytes(to_gray(img)))
    run.results = {
        "which": args.which,
        "j": args.j,
        "relative_energies": res.energies.tolist(),
        "reconstruction_error": res.reconstruction_error,
    }


# parser -------------------------------------------------------------------------
def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    env_threads = int(os.environ.get("PATTERNFFT_THREADS", os.cpu_count() or 1))
    env_limit = int(os.environ.get("PATTERNFFT_DENSE_LIMIT", 4096))

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random inputs (default 0)")
    common.add_argument("--threads", type=_positive, default=env_threads,
                        help="worker threads (default: $PATTERNFFT_THREADS or the core count)")
    common.add_argument("--dense-limit", type=_positive, default=env_limit,
                        help="largest m for dense matrices (default: $PATTERNFFT_DENSE_LIMIT or 4096)")
    common.add_argument("--summary", help="write the run summary JSON here")

    p = argparse.ArgumentParser(prog="patternfft", description="FFT and wavelets on patterns of integer matrices.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func)
        return sp

    matrix_help = "integer matrix: a file (JSON or whitespace rows) or inline JSON such as '[[4,-3],[4,5]]'"

    sp = add("snf", cmd_snf, "Smith normal form M = Q E R")
    sp.add_argument("matrix", nargs="?", help=matrix_help)
    sp.add_argument("--matrix", dest="matrix_opt", help=matrix_help)
    sp.add_argument("--output", help="write the result here instead of stdout")

    sp = add("pattern", cmd_pattern, "list the pattern points in basis order")
    sp.add_argument("--matrix", required=True, help=matrix_help)
    sp.add_argument("--window", choices=WINDOWS, default="unit")
    sp.add_argument("--output")

    sp = add("generators", cmd_generators, "list the frequency set G(M^T) in basis order")
    sp.add_argument("--matrix", required=True, help=matrix_help)
    sp.add_argument("--output")

    sp = add("fft", cmd_fft, "Fourier transform of values on the pattern")
    sp.add_argument("--matrix", required=True, help=matrix_help)
    sp.add_argument("--input", help="CSV with columns re,im in basis order (random when omitted)")
    sp.add_argument("--inverse", action="store_true", help="inverse transform")
    sp.add_argument("--oracle", action="store_true", help="use the dense Fourier matrix")
    sp.add_argument("--output")

    sp = add("bench", cmd_bench, "serial vs threaded timings for [[l, i], [0, k]] normal forms")
    sp.add_argument("--m", type=_positive, default=2**20, help="number of points (default 2^20)")
    sp.add_argument("--shape", type=int, action="append", help="upper-right entry i (repeatable; default sweep)")
    sp.add_argument("--reps", type=_positive, default=50, help="runs per mean (default 50)")
    sp.add_argument("--engine", choices=("pocketfft", "native"), default="pocketfft")
    sp.add_argument("--output")

    sp = add("dirichlet", cmd_dirichlet, "Dirichlet kernel spectrum, wavelet spectrum and filter bank")
    sp.add_argument("--matrix", required=True, help=matrix_help)
    sp.add_argument("--factor-j", help="split J (|det J| = 2) to also emit the wavelet and filters.json")
    sp.add_argument("--output-dir", required=True)

    sp = add("wavedec", cmd_wavedec, "multilevel wavelet decomposition")
    sp.add_argument("--matrix", required=True, help=matrix_help)
    sp.add_argument("--factor-j", action="append", help="split J, repeat for more levels")
    sp.add_argument("--filters", default="dirichlet", help="'dirichlet' or a filter-bank JSON file")
    sp.add_argument("--input", help="CSV with columns re,im in basis order (random when omitted)")
    sp.add_argument("--output-dir", required=True)

    demo = sub.add_parser("demo", help="demonstrations")
    demo_sub = demo.add_subparsers(dest="demo", required=True)
    sp = demo_sub.add_parser("boxspline", parents=[common], help="directional split of a sampled box spline")
    sp.set_defaults(func=cmd_demo)
    sp.add_argument("--which", choices=("xi", "psi"), default="xi")
    sp.add_argument("--matrix", default="[[128,0],[0,128]]", help=matrix_help)
    sp.add_argument("--j", choices=("x", "y", "d"), default="d")
    sp.add_argument("--resolution", type=_positive, help="image side in pixels (default sqrt(m))")
    sp.add_argument("--output-dir", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "snf":
        args.matrix = args.matrix or args.matrix_opt
        if args.matrix is None:
            parser.error("snf needs a matrix")
    if args.command == "demo":
        args.command = f"demo {args.demo}"
    run = Run(args)
    status = 0
    t0 = time.perf_counter()
    try:
        args.func(run)
    except PatternError as exc:
        print(f"patternfft: error: {exc}", file=sys.stderr)
        run.results["error"] = str(exc)
        status = 1
    run.timings["total"] = time.perf_counter() - t0
    summary_path = args.summary
    if summary_path is None and getattr(args, "output_dir", None) and status == 0:
        summary_path = Path(args.output_dir) / "summary.json"
    if summary_path:
        pio.atomic_write(summary_path, json.dumps(run.summary(), indent=1, default=_jsonable) + "\n")
    return status


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (tuple, set)):
        return list(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


if __name__ == "__main__":
    sys.exit(main())
