"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

import numpy as np

from . import intlinalg as il
from .exceptions import PatternError, ShapeMismatch, SingularMatrix


def check_matrix(m, name: str = "matrix") -> il.IntMatrix:
    """A regular square integer matrix as an immutable tuple of tuples."""
    try:
        m = il.as_int_matrix(m)
    except (TypeError, ValueError) as exc:
        raise PatternError(f"{name}: {exc}") from exc
    if il.determinant(m) == 0:
        raise SingularMatrix(f"{name} {m} is singular")
    return m


def check_samples(X, n_features: int, name: str = "X") -> np.ndarray:
    """2-D complex array with ``n_features`` columns.

    A single vector is treated as one sample.  Complex input is accepted,
    which rules out ``sklearn.utils.check_array``.
    """
    X = np.asarray(X)
    if X.dtype == object or not np.issubdtype(X.dtype, np.number):
        raise PatternError(f"{name} must be numeric")
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ShapeMismatch(f"{name} must be 1-D or 2-D, got shape {X.shape}")
    if X.shape[1] != n_features:
        raise ShapeMismatch(f"{name} has {X.shape[1]} columns, expected {n_features}")
    X = X.astype(np.complex128)
    if not np.all(np.isfinite(X)):
        raise PatternError(f"{name} contains NaN or infinity")
    return X
