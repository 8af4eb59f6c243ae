"""2-D piecewise-linear paths and their exact level-1/level-2 signature terms.

A path is a sequence of points in the plane, understood as the polyline
connecting them.  The level-1 term is the increment vector; the level-2 term
is the 2x2 matrix of ordered double integrals, which splits into an
antisymmetric part (the Levy area, the signed area between the trajectory
and its chord) and a symmetric part determined entirely by the increments.

All quantities depend on the vertex order only; timestamps, when attached,
are ignored by every computation here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Path2D:
    """A 2-D piecewise-linear path given by its vertices.

    points has shape (n, 2) with n >= 2.  timestamps, if given, must be
    strictly increasing and the same length as points; they exist only
    for bookkeeping by callers.
    """

    points: np.ndarray
    timestamps: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (n, 2), got {pts.shape}")
        if pts.shape[0] < 2:
            raise ValueError("a path needs at least two points")
        object.__setattr__(self, "points", pts)
        if self.timestamps is not None:
            ts = np.asarray(self.timestamps, dtype=np.float64)
            if ts.shape != (pts.shape[0],):
                raise ValueError("timestamps must match the number of points")
            if not np.all(np.diff(ts) > 0):
                raise ValueError("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class Level2Signature:
    """Signature of a 2-D path truncated at degree 2.

    inc     -- level-1 increments, shape (2,)
    tensor  -- level-2 iterated integrals, shape (2, 2); tensor[i, j] is the
               integral of dX(i) dX(j) over ordered time pairs
    levy    -- the Levy area, half the antisymmetric part of tensor
    sym     -- the symmetric part; sym[i, j] = inc[i] * inc[j] / 2

    tensor == sym + [[0, levy], [-levy, 0]] holds by construction.
    """

    inc: np.ndarray
    tensor: np.ndarray
    levy: float
    sym: np.ndarray


def _polygon_area(vertices: np.ndarray) -> float:
    """Signed shoelace area of the closed polygon through ``vertices``.

    The closing edge from the last vertex back to the first is implicit.
    """
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def level1(path: Path2D) -> np.ndarray:
    """Increment vector: last point minus first point."""
    return path.points[-1] - path.points[0]


def level2(path: Path2D) -> Level2Signature:
    """Exact degree-2 signature of a piecewise-linear path.

    Evaluated in closed form: recentring the path at its start point, the
    Levy area is half the shoelace sum of the vertex polygon (the closing
    chord edge passes through the origin and contributes nothing), and the
    symmetric part is the outer product of the increments over two.  The
    off-diagonal tensor entries are then sym[0, 1] +/- levy.

    This is algebraically identical to summing prefix * increment terms
    segment by segment, but keeps the diagonal and shuffle identities exact
    to the last bit instead of leaving them to cancellation.
    """
    q = path.points - path.points[0]
    inc = q[-1].copy()
    levy = _polygon_area(q)
    sym = 0.5 * np.outer(inc, inc)
    tensor = sym.copy()
    tensor[0, 1] += levy
    tensor[1, 0] -= levy
    return Level2Signature(inc=inc, tensor=tensor, levy=levy, sym=sym)


def decompose(sig: Level2Signature) -> tuple[float, np.ndarray]:
    """Split a level-2 signature into (Levy area, symmetric part).

    The antisymmetric part is the matrix [[0, levy], [-levy, 0]]; adding the
    returned symmetric matrix reproduces sig.tensor exactly.
    """
    return sig.levy, sig.sym


def chen_concat(sig_a: Level2Signature, sig_b: Level2Signature) -> Level2Signature:
    """Signature of the concatenation of two consecutive path pieces.

    inc adds; tensor adds plus the outer product of the first piece's
    increments with the second's.  Equals level2 of the joined point list.
    """
    inc = sig_a.inc + sig_b.inc
    tensor = sig_a.tensor + sig_b.tensor + np.outer(sig_a.inc, sig_b.inc)
    levy = 0.5 * (tensor[0, 1] - tensor[1, 0])
    sym = 0.5 * (tensor + tensor.T)
    return Level2Signature(inc=inc, tensor=tensor, levy=levy, sym=sym)


def total_variation(path: Path2D) -> float:
    """Sum of Euclidean lengths of the path's segments."""
    deltas = np.diff(path.points, axis=0)
    return float(np.sum(np.hypot(deltas[:, 0], deltas[:, 1])))
