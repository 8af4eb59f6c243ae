"""Rolling indicators over an aligned pair: Z-score of the raw spread,
windowed signature and segmented signature of the log paths, the lagged
path-difference product, and expanding historical means used as filters.

Absence is explicit: every column is NaN until its window or history is
filled.  Signatures are computed on log prices; the spread, Z-score and
difference product use raw prices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .data_io import AlignedPairSeries
from .errors import ConfigError, UndefinedCVError
from .path_core import Path2D, level2
from .segmented import segmented_levy

FLAT_SPREAD_GUARD = 1e-12


@dataclass(frozen=True)
class IndicatorConfig:
    """Window lengths for the rolling indicators.

    sig_window is the number of observations in each signature window
    (so sig_window - 1 path segments) and also the lag of the difference
    product; min_history is how many values the expanding means need
    before the filters activate.
    """

    sig_window: int = 60
    z_window: int = 60
    min_history: int = 30

    def __post_init__(self):
        if self.sig_window < 2:
            raise ConfigError(f"sig_window must be >= 2, got {self.sig_window}")
        if self.z_window < 2:
            raise ConfigError(f"z_window must be >= 2, got {self.z_window}")
        if self.min_history < 1:
            raise ConfigError(f"min_history must be >= 1, got {self.min_history}")


class FrameRow(NamedTuple):
    spread: float
    z: float
    sig: float
    seg_sig: float
    diff_prod: float
    hist_mean_sig: float
    hist_mean_seg: float


@dataclass(frozen=True)
class IndicatorFrame:
    """Per-timestamp indicator columns; NaN marks a value whose window or
    history is not yet filled."""

    timestamps: list[datetime]
    spread: np.ndarray
    z: np.ndarray
    sig: np.ndarray
    seg_sig: np.ndarray
    diff_prod: np.ndarray
    hist_mean_sig: np.ndarray
    hist_mean_seg: np.ndarray

    def __len__(self) -> int:
        return len(self.timestamps)

    def row(self, i: int) -> FrameRow:
        return FrameRow(
            spread=float(self.spread[i]),
            z=float(self.z[i]),
            sig=float(self.sig[i]),
            seg_sig=float(self.seg_sig[i]),
            diff_prod=float(self.diff_prod[i]),
            hist_mean_sig=float(self.hist_mean_sig[i]),
            hist_mean_seg=float(self.hist_mean_seg[i]),
        )


def z_score(series: AlignedPairSeries, z_window: int) -> np.ndarray:
    """Rolling Z-score of the raw spread.

    The window covers the trailing z_window observations including the
    current one; the standard deviation is the sample one (n-1).  NaN while
    the window is unfilled or when the spread is flat over the window.
    """
    if z_window < 2:
        raise ConfigError(f"z_window must be >= 2, got {z_window}")
    spread = series.raw_1 - series.raw_2
    n = spread.shape[0]
    out = np.full(n, np.nan)
    if n < z_window:
        return out
    windows = sliding_window_view(spread, z_window)
    mean = windows.mean(axis=1)
    std = windows.std(axis=1, ddof=1)
    ok = std >= FLAT_SPREAD_GUARD
    vals = np.full(mean.shape, np.nan)
    vals[ok] = (spread[z_window - 1:][ok] - mean[ok]) / std[ok]
    out[z_window - 1:] = vals
    return out


def windowed_signature(series: AlignedPairSeries, w: int) -> np.ndarray:
    """Cross term of the level-2 signature over each trailing w-point window
    of the two log-price paths."""
    if w < 2:
        raise ConfigError(f"sig_window must be >= 2, got {w}")
    pts = np.column_stack([series.log_1, series.log_2])
    n = pts.shape[0]
    out = np.full(n, np.nan)
    for t in range(w - 1, n):
        out[t] = level2(Path2D(pts[t - w + 1: t + 1])).tensor[0, 1]
    return out


def windowed_segmented(series: AlignedPairSeries, w: int) -> np.ndarray:
    """Segmented Levy area C over each trailing w-point log-price window."""
    if w < 2:
        raise ConfigError(f"sig_window must be >= 2, got {w}")
    pts = np.column_stack([series.log_1, series.log_2])
    n = pts.shape[0]
    out = np.full(n, np.nan)
    for t in range(w - 1, n):
        out[t] = segmented_levy(Path2D(pts[t - w + 1: t + 1])).c_value
    return out


def diff_product(series: AlignedPairSeries, w: int) -> np.ndarray:
    """Product of the two assets' raw price changes over lag w."""
    if w < 1:
        raise ConfigError(f"lag must be >= 1, got {w}")
    n = len(series)
    out = np.full(n, np.nan)
    if n > w:
        out[w:] = (series.raw_1[w:] - series.raw_1[:-w]) * (series.raw_2[w:] - series.raw_2[:-w])
    return out


def expanding_mean(values: np.ndarray, min_history: int) -> np.ndarray:
    """Mean of all present values strictly before each position.

    NaN until min_history present values have accumulated; never looks at
    the current or any later value.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    out = np.full(n, np.nan)
    present = np.isfinite(values)
    cum_sum = np.cumsum(np.where(present, values, 0.0))
    cum_cnt = np.cumsum(present)
    prior_sum = np.concatenate([[0.0], cum_sum[:-1]])
    prior_cnt = np.concatenate([[0], cum_cnt[:-1]])
    ok = prior_cnt >= min_history
    out[ok] = prior_sum[ok] / prior_cnt[ok]
    return out


def coefficient_of_variation(values, shift_to_positive: bool = False) -> float:
    """Sample standard deviation over mean.

    With shift_to_positive (used for the signed signature series) the values
    are first shifted so their minimum sits at zero, keeping the dispersion
    while avoiding sign cancellation in the mean.
    """
    v = np.asarray(values, dtype=np.float64)
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise UndefinedCVError("no values")
    if v.size < 2:
        raise UndefinedCVError("need at least two values for a sample deviation")
    if shift_to_positive:
        v = v - v.min()
    mu = float(v.mean())
    if mu < 1e-15:
        raise UndefinedCVError(f"mean {mu!r} is not positive")
    return float(v.std(ddof=1)) / mu


def compute_frame(
    series: AlignedPairSeries,
    cfg: IndicatorConfig,
    session_mode: str = "continuous",
) -> IndicatorFrame:
    """Assemble every indicator column for one pair.

    In per_day mode all rolling windows and the expanding historical means
    restart at each day boundary, so no indicator ever spans an overnight
    gap; in continuous mode the whole series is one session.
    """
    if session_mode not in ("continuous", "per_day"):
        raise ConfigError(f"unknown session_mode: {session_mode!r}")
    n = len(series)
    spread = series.raw_1 - series.raw_2
    z = np.full(n, np.nan)
    sig = np.full(n, np.nan)
    seg = np.full(n, np.nan)
    dprod = np.full(n, np.nan)
    hist_sig = np.full(n, np.nan)
    hist_seg = np.full(n, np.nan)
    chunks = series.day_slices() if session_mode == "per_day" else [slice(0, n)]
    for sl in chunks:
        sub = series.restrict(sl)
        z[sl] = z_score(sub, cfg.z_window)
        sig[sl] = windowed_signature(sub, cfg.sig_window)
        seg[sl] = windowed_segmented(sub, cfg.sig_window)
        dprod[sl] = diff_product(sub, cfg.sig_window)
        hist_sig[sl] = expanding_mean(sig[sl], cfg.min_history)
        hist_seg[sl] = expanding_mean(seg[sl], cfg.min_history)
    return IndicatorFrame(
        timestamps=list(series.timestamps),
        spread=spread,
        z=z,
        sig=sig,
        seg_sig=seg,
        diff_prod=dprod,
        hist_mean_sig=hist_sig,
        hist_mean_seg=hist_seg,
    )


FRAME_COLUMNS = ("spread", "z", "sig", "seg_sig", "diff_prod", "hist_mean_sig", "hist_mean_seg")


def _cell(x: float) -> str:
    return "" if math.isnan(x) else repr(x)


def write_frame_csv(frame: IndicatorFrame, path: str) -> None:
    """One row per timestamp; absent values become empty cells."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("timestamp," + ",".join(FRAME_COLUMNS) + "\n")
        for i, ts in enumerate(frame.timestamps):
            cells = [_cell(float(getattr(frame, col)[i])) for col in FRAME_COLUMNS]
            fh.write(ts.isoformat(timespec="minutes") + "," + ",".join(cells) + "\n")
