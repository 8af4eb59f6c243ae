"""Segmented Levy area: split a path where it crosses its own chord and
accumulate the absolute enclosed areas.

The plain Levy area of a window nets positive lobes against negative ones.
Splitting the trajectory at its crossings with the chord and summing the
absolute per-segment areas gives a nonnegative quantity C that is zero
exactly when the two coordinates are affinely dependent, and C >= |A|
always.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SigpairError
from .path_core import Path2D, _polygon_area

DEFAULT_TOLERANCE = 1e-12


class DegenerateChordError(SigpairError):
    """Chord endpoints coincide; segmentation by chord crossings is undefined."""


class Crossing(NamedTuple):
    segment: int        # index of the path segment containing the crossing
    fraction: float     # position within that segment, in (0, 1]
    point: np.ndarray   # crossing location, path coordinates


@dataclass(frozen=True)
class SegmentedLevyArea:
    """Chord-crossing decomposition of a path's Levy area.

    segment_areas holds the signed area of each sub-path closed with its own
    chord piece; c_value is the sum of their absolute values and total_levy
    their plain sum, which equals the whole-path Levy area.
    """

    chord: tuple[np.ndarray, np.ndarray]
    crossings: list[Crossing]
    segment_areas: np.ndarray
    c_value: float
    total_levy: float


def _crossing_params(q: np.ndarray, tolerance: float) -> list[tuple[int, float]]:
    """Locate chord crossings of the recentred path ``q`` (q[0] == origin).

    Returns (segment index, fraction) pairs ordered along the path.  A vertex
    counts as on-chord when its distance to the chord line is within
    tolerance * chord length; a crossing is emitted wherever the strict side
    of the chord changes, either inside a segment (located by linear
    interpolation) or at an on-chord vertex run separating opposite sides.
    Raises DegenerateChordError when the chord has no direction.
    """
    d = q[-1]
    chord_len2 = float(d[0] * d[0] + d[1] * d[1])
    scale = float(np.max(np.abs(q)))
    if scale == 0.0 or chord_len2 <= (tolerance * scale) ** 2:
        raise DegenerateChordError("chord endpoints coincide")

    # c[k] = cross(chord direction, vertex k) = signed distance * chord length
    c = d[0] * q[:, 1] - d[1] * q[:, 0]
    on_chord = np.abs(c) <= tolerance * chord_len2
    signs = np.where(on_chord, 0, np.sign(c)).astype(np.int8)

    params: list[tuple[int, float]] = []
    last_sign = 0
    last_idx = -1
    for k in np.nonzero(signs)[0]:
        s = signs[k]
        if last_sign != 0 and s != last_sign:
            if k == last_idx + 1:
                # strict sign change across one segment: interpolate
                t = float(c[last_idx] / (c[last_idx] - c[k]))
                params.append((int(last_idx), t))
            else:
                # an on-chord vertex run separates the sides; the first
                # such vertex is the crossing point
                params.append((int(last_idx), 1.0))
        last_sign = s
        last_idx = int(k)
    return _merge_close(params, q, tolerance)


def _param_point(q: np.ndarray, seg: int, frac: float) -> np.ndarray:
    if frac >= 1.0:
        return q[seg + 1]
    return q[seg] + frac * (q[seg + 1] - q[seg])


def _merge_close(params, q, tolerance):
    """Drop crossings within tolerance * chord length of the previous one."""
    if len(params) < 2:
        return params
    eps = tolerance * float(np.hypot(q[-1, 0], q[-1, 1]))
    kept = [params[0]]
    prev_pt = _param_point(q, *params[0])
    for seg, frac in params[1:]:
        pt = _param_point(q, seg, frac)
        if float(np.hypot(pt[0] - prev_pt[0], pt[1] - prev_pt[1])) > eps:
            kept.append((seg, frac))
            prev_pt = pt
    return kept


def chord_crossings(path: Path2D, tolerance: float = DEFAULT_TOLERANCE) -> list[Crossing]:
    """Crossings of the path with its chord, ordered along the path.

    Endpoints are never reported.  Raises DegenerateChordError when start
    and end coincide (within tolerance relative to the path's extent).
    """
    pts = path.points
    q = pts - pts[0]
    params = _crossing_params(q, tolerance)
    return [
        Crossing(seg, frac, pts[0] + _param_point(q, seg, frac))
        for seg, frac in params
    ]


def _split_at(q: np.ndarray, params: list[tuple[int, float]]) -> list[np.ndarray]:
    """Cut the recentred vertex list at the given (segment, fraction) spots."""
    positions = [seg + frac for seg, frac in params]
    points = [_param_point(q, seg, frac) for seg, frac in params]
    pieces: list[np.ndarray] = []
    cur = [q[0]]
    si = 0
    for k in range(1, q.shape[0]):
        while si < len(positions) and positions[si] < k:
            cur.append(points[si])
            pieces.append(np.asarray(cur))
            cur = [points[si]]
            si += 1
        cur.append(q[k])
        if si < len(positions) and positions[si] == k:
            pieces.append(np.asarray(cur))
            cur = [q[k]]
            si += 1
    pieces.append(np.asarray(cur))
    return pieces


def segmented_levy(path: Path2D, tolerance: float = DEFAULT_TOLERANCE) -> SegmentedLevyArea:
    """Segmented Levy area of a path with respect to its chord.

    The path is cut at every chord crossing; each sub-path, closed along the
    chord, contributes the signed shoelace area of its vertex polygon.  For a
    degenerate chord (closed loop) there is a single segment and C = |A|.
    """
    pts = path.points
    q = pts - pts[0]
    chord = (pts[0].copy(), pts[-1].copy())
    try:
        params = _crossing_params(q, tolerance)
    except DegenerateChordError:
        area = _polygon_area(q)
        return SegmentedLevyArea(
            chord=chord,
            crossings=[],
            segment_areas=np.array([area]),
            c_value=abs(area),
            total_levy=area,
        )
    pieces = _split_at(q, params)
    areas = np.array([_polygon_area(piece) for piece in pieces])
    crossings = [
        Crossing(seg, frac, pts[0] + _param_point(q, seg, frac))
        for seg, frac in params
    ]
    return SegmentedLevyArea(
        chord=chord,
        crossings=crossings,
        segment_areas=areas,
        c_value=float(np.sum(np.abs(areas))),
        total_levy=float(np.sum(areas)),
    )
