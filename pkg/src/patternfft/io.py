"""Plain-text file formats: matrices, complex vectors, spectra, filter banks, PGM.

Every writer goes through :func:`atomic_write`, which writes a sibling
temporary file and renames it into place.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import intlinalg as il
from .exceptions import PatternError, ShapeMismatch
from .lattice import PatternBasis, build_basis


def atomic_write(path, data: bytes | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# matrices -------------------------------------------------------------------
def parse_matrix(text: str) -> il.IntMatrix:
    """Integer matrix from JSON (``[[4,-3],[4,5]]`` or ``{"M": ...}``) or from
    whitespace/comma separated rows."""
    text = text.strip()
    if not text:
        raise PatternError("empty matrix text")
    if text[0] in "[{":
        obj = json.loads(text)
        if isinstance(obj, dict):
            obj = obj.get("matrix", obj.get("M"))
        return il.as_int_matrix(obj)
    rows = [line.replace(",", " ").split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    return il.as_int_matrix([[int(v) for v in row] for row in rows])


def read_matrix(source) -> il.IntMatrix:
    """A matrix from a file path, or inline text when ``source`` is not an existing file."""
    p = Path(str(source))
    if p.is_file():
        return parse_matrix(p.read_text())
    return parse_matrix(str(source))


def format_matrix(m: Sequence[Sequence[int]]) -> str:
    return json.dumps([list(map(int, row)) for row in m])


# complex vectors --------------------------------------------------------------
def _fmt(x: float) -> str:
    return repr(float(x))


def complex_csv(values: np.ndarray, index: np.ndarray | None = None, index_names: Sequence[str] = ()) -> str:
    """CSV with optional integer index columns followed by ``re,im``."""
    values = np.asarray(values, dtype=np.complex128).reshape(-1)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*index_names, "re", "im"])
    for i, v in enumerate(values):
        idx = [] if index is None else [int(t) for t in index[i]]
        w.writerow([*idx, _fmt(v.real), _fmt(v.imag)])
    return buf.getvalue()


def write_complex_csv(path, values, index=None, index_names: Sequence[str] = ()) -> Path:
    return atomic_write(path, complex_csv(values, index, index_names))


def read_complex_csv(path) -> np.ndarray:
    """Values from a CSV written by :func:`write_complex_csv` (or a bare
    one- or two-column file of reals / ``re,im`` pairs)."""
    rows = [r for r in csv.reader(Path(path).read_text().splitlines()) if r]
    if rows and any(c.strip() in ("re", "im") for c in rows[0]):
        head = [c.strip() for c in rows[0]]
        ri, ii = head.index("re"), head.index("im")
        return np.array([float(r[ri]) + 1j * float(r[ii]) for r in rows[1:]], dtype=np.complex128)
    out = []
    for r in rows:
        if len(r) == 1:
            out.append(complex(float(r[0])))
        else:
            out.append(float(r[0]) + 1j * float(r[1]))
    return np.array(out, dtype=np.complex128)


def pattern_csv(points: Iterable[Sequence[Fraction]], index: np.ndarray) -> str:
    """Pattern points as ``lambda_*`` index columns and ``p/q`` rational coordinates."""
    points = list(points)
    d = len(points[0]) if points else 0
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"lambda_{i + 1}" for i in range(index.shape[1])] + [f"x_{i + 1}" for i in range(d)])
    for lam, p in zip(index, points):
        w.writerow([int(v) for v in lam] + [str(Fraction(v)) for v in p])
    return buf.getvalue()


def generators_csv(points: np.ndarray, index: np.ndarray) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"mu_{i + 1}" for i in range(index.shape[1])] + [f"k_{i + 1}" for i in range(points.shape[1])])
    for mu, k in zip(index, points):
        w.writerow([int(v) for v in mu] + [int(v) for v in k])
    return buf.getvalue()


def spectrum_csv(support: np.ndarray, values: np.ndarray) -> str:
    d = support.shape[1]
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"k_{i + 1}" for i in range(d)] + ["value_re", "value_im"])
    for k, v in zip(support, values):
        w.writerow([int(t) for t in k] + [_fmt(v.real), _fmt(v.imag)])
    return buf.getvalue()


# filter banks -------------------------------------------------------------------
def filter_bank_json(fb) -> str:
    return json.dumps(
        {
            "M": [list(r) for r in fb.m_basis.matrix],
            "J": [list(r) for r in fb.j_basis.matrix],
            "N": [list(r) for r in fb.n_basis.matrix],
            "branches": [
                {"re": b.real.ravel().tolist(), "im": b.imag.ravel().tolist()} for b in fb.bhat
            ],
        },
        indent=1,
    )


def load_filter_bank(path):
    from .wavelet import FilterBank

    obj = json.loads(Path(path).read_text())
    try:
        m, j, n = (il.as_int_matrix(obj[key]) for key in ("M", "J", "N"))
        bhat = np.array([np.asarray(b["re"]) + 1j * np.asarray(b["im"]) for b in obj["branches"]])
    except (KeyError, TypeError) as exc:
        raise PatternError(f"malformed filter-bank file {path}: {exc}") from exc
    return FilterBank(build_basis(m), build_basis(n), build_basis(j), bhat)


# images -----------------------------------------------------------------------
def pgm_bytes(gray: np.ndarray) -> bytes:
    gray = np.asarray(gray)
    if gray.ndim != 2 or gray.dtype != np.uint8:
        raise ShapeMismatch("PGM output needs a 2-D uint8 array")
    h, w = gray.shape
    return f"P5\n{w} {h}\n255\n".encode() + gray.tobytes()


def write_pgm(path, gray: np.ndarray) -> Path:
    return atomic_write(path, pgm_bytes(gray))


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    header = re.match(rb"P5\s+(\d+)\s+(\d+)\s+(\d+)\s", data)
    if header is None:
        raise PatternError("not a binary PGM file")
    w, h, maxval = (int(g) for g in header.groups())
    if maxval != 255:
        raise PatternError("only 8-bit PGM is supported")
    start = header.end()
    return np.frombuffer(data[start : start + w * h], dtype=np.uint8).reshape(h, w)


def basis_summary(basis: PatternBasis) -> dict:
    return {
        "matrix": [list(r) for r in basis.matrix],
        "det": basis.det,
        "cycle_lengths": list(basis.cycle_lengths),
    }
