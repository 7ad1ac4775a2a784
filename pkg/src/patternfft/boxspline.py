"""Bivariate box splines, evaluated by the de Boor recurrence.

For a direction matrix ``X`` (columns ``xi``) spanning the plane and more
than two directions,

    (n - d) B_X(x) = sum_xi  t_xi B_{X \\ xi}(x) + (1 - t_xi) B_{X \\ xi}(x - xi),

with ``t = X^+ x`` any solution of ``X t = x``.  Terms whose reduced
direction set no longer spans contribute only on a null set and are
dropped.  The base case ``n = d`` is the indicator of the half-open
parallelepiped ``X [0, 1)^d`` divided by ``|det X|``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import DegenerateDirections
from .fft import LatticeArray
from .lattice import PatternBasis, pattern_numerators

_RANK_TOL = 1e-12
# Lattice samples routinely land on mesh lines, where the half-open base
# cases of different recurrence terms disagree.  Whenever every direction
# subset with one element removed still spans, the spline is continuous, so
# evaluating at a tiny generic offset returns the limit value instead.
_NUDGE = np.array([0.7071067811865476e-10, 0.5772156649015329e-10])


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Directions stored as the columns of a ``(2, s)`` array."""

    directions: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        xi = np.asarray(self.directions, dtype=float)
        if xi.ndim != 2 or xi.shape[0] != 2 or xi.shape[1] < 2:
            raise DegenerateDirections(f"need a 2 x s direction matrix with s >= 2, got {xi.shape}")
        if abs(np.linalg.det(xi[:, :2])) <= _RANK_TOL * max(1.0, np.abs(xi).max() ** 2):
            raise DegenerateDirections("the first two directions are linearly dependent")
        object.__setattr__(self, "directions", xi)

    @property
    def dim(self) -> int:
        return 2

    @property
    def count(self) -> int:
        return self.directions.shape[1]

    @property
    def center(self) -> np.ndarray:
        return 0.5 * self.directions.sum(axis=1)

    @cached_property
    def continuous(self) -> bool:
        full = (1 << self.count) - 1
        node = self._nodes[full]
        return node[0] == "rec" and len(node[3]) == self.count

    @cached_property
    def _nodes(self) -> dict:
        """Per-subset data: pseudo-inverse, or inverse and ``1/|det|`` for bases."""
        nodes = {}
        full = (1 << self.count) - 1

        def visit(mask):
            if mask in nodes:
                return
            cols = [i for i in range(self.count) if mask >> i & 1]
            sub = self.directions[:, cols]
            if len(cols) == 2:
                nodes[mask] = ("base", cols, np.linalg.inv(sub), 1.0 / abs(np.linalg.det(sub)))
                return
            children = []
            for pos, i in enumerate(cols):
                child = mask & ~(1 << i)
                rest = self.directions[:, [c for c in cols if c != i]]
                if np.linalg.matrix_rank(rest, tol=_RANK_TOL * max(1.0, np.abs(rest).max())) < 2:
                    continue
                children.append((pos, i, child))
                visit(child)
            nodes[mask] = ("rec", cols, np.linalg.pinv(sub), children)

        visit(full)
        return nodes

    def _eval(self, mask: int, x: np.ndarray) -> np.ndarray:
        node = self._nodes[mask]
        if node[0] == "base":
            _, _, inv, scale = node
            t = x @ inv.T
            inside = np.all((t >= 0) & (t < 1), axis=1)
            return inside * scale
        _, cols, pinv, children = node
        t = x @ pinv.T
        acc = np.zeros(len(x))
        for pos, i, child in children:
            xi = self.directions[:, i]
            acc += t[:, pos] * self._eval(child, x) + (1 - t[:, pos]) * self._eval(child, x - xi)
        return acc / (len(cols) - 2)

    def __call__(self, x) -> np.ndarray:
        return eval_box_spline(self, x)


def eval_box_spline(ds: DirectionSet, x, centered: bool = True) -> np.ndarray:
    """Box spline values at the points ``x`` (shape ``(..., 2)``).

    With ``centered`` (the default) the spline is shifted by half the sum of
    its directions, so it is symmetric about the origin.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    if centered:
        pts = pts + ds.center
    if ds.continuous:
        pts = pts + _NUDGE
    full = (1 << ds.count) - 1
    # the recurrence mixes signs, so exact zeros can come out as -1e-18
    return np.maximum(ds._eval(full, pts), 0.0).reshape(shape)


def sample_on_pattern(ds: DirectionSet | None, basis: PatternBasis, window: str = "centered") -> LatticeArray:
    """Values at ``2 pi y`` for the pattern points ``y`` of ``window``, lambda-ordered.

    ``ds=None`` samples the zero function.
    """
    num, den = pattern_numerators(basis, window)
    if ds is None:
        return LatticeArray(basis, np.zeros(len(num)), "spatial")
    return LatticeArray(basis, eval_box_spline(ds, 2 * np.pi * num / den), "spatial")


XI = DirectionSet(np.pi * np.array([[1.0, 0.0, 1 / 8], [0.0, 1.0, 1 / 8]]), name="xi")
PSI = DirectionSet(
    np.pi * np.array([[1.0, 0.0, 1 / 8, 0.0, 1 / 8], [0.0, 1.0, 0.0, 1 / 8, 1 / 8]]), name="psi"
)
DIRECTION_SETS = {"xi": XI, "psi": PSI}
