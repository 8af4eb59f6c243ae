"""Minute-bar CSV ingestion and pairwise alignment.

Input files carry a ``timestamp,price`` header and one bar per row, with
ISO-8601 minute timestamps (``YYYY-MM-DDTHH:MM``).  Two bar lists join on
exact timestamps; minutes present in only one asset are dropped, so every
window downstream reflects genuinely co-observed prices.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from datetime import date, datetime

import numpy as np

from .errors import AlignmentError, DataError, ParseError


@dataclass(frozen=True)
class MinuteBar:
    timestamp: datetime
    price: float
    symbol: str


@dataclass(frozen=True)
class AlignedPairSeries:
    """Time-aligned raw and log prices for one asset pair.

    All arrays share the length of ``timestamps``; log_k[i] is the natural
    log of raw_k[i], taken once at ingestion.  trading_day holds the
    calendar date of each timestamp.
    """

    timestamps: list[datetime]
    raw_1: np.ndarray
    raw_2: np.ndarray
    log_1: np.ndarray
    log_2: np.ndarray
    trading_day: list[date]

    def __len__(self) -> int:
        return len(self.timestamps)

    def day_slices(self) -> list[slice]:
        """Contiguous index ranges covering each trading day in order."""
        slices = []
        start = 0
        for i in range(1, len(self.trading_day)):
            if self.trading_day[i] != self.trading_day[i - 1]:
                slices.append(slice(start, i))
                start = i
        slices.append(slice(start, len(self.trading_day)))
        return slices

    def restrict(self, sl: slice) -> "AlignedPairSeries":
        return AlignedPairSeries(
            timestamps=self.timestamps[sl],
            raw_1=self.raw_1[sl],
            raw_2=self.raw_2[sl],
            log_1=self.log_1[sl],
            log_2=self.log_2[sl],
            trading_day=self.trading_day[sl],
        )


def load_bars(file_path: str, symbol: str) -> list[MinuteBar]:
    """Read one asset's minute bars from a CSV file.

    Rejects malformed rows (with their line number), duplicate or
    out-of-order timestamps, and non-positive prices.
    """
    if not os.path.exists(file_path):
        raise DataError(f"data file not found: {file_path}")
    bars: list[MinuteBar] = []
    with open(file_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{file_path}: empty file, expected a header row")
        if [h.strip().lower() for h in header] != ["timestamp", "price"]:
            raise ParseError(f"{file_path}: expected header 'timestamp,price', got {header!r}")
        prev: datetime | None = None
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ParseError(f"{file_path}: expected 2 fields, got {len(row)}", line_no)
            ts_text, price_text = row[0].strip(), row[1].strip()
            try:
                ts = datetime.fromisoformat(ts_text)
            except ValueError:
                raise ParseError(f"{file_path}: bad timestamp {ts_text!r}", line_no)
            try:
                price = float(price_text)
            except ValueError:
                raise ParseError(f"{file_path}: bad price {price_text!r}", line_no)
            if not math.isfinite(price) or price <= 0.0:
                raise DataError(f"{file_path}: line {line_no}: non-positive price {price_text}")
            if prev is not None:
                if ts == prev:
                    raise DataError(f"{file_path}: line {line_no}: duplicate timestamp {ts_text}")
                if ts < prev:
                    raise DataError(f"{file_path}: line {line_no}: timestamps not increasing at {ts_text}")
            bars.append(MinuteBar(timestamp=ts, price=price, symbol=symbol))
            prev = ts
    return bars


def align_pair(bars_1: list[MinuteBar], bars_2: list[MinuteBar]) -> AlignedPairSeries:
    """Inner-join two sorted bar lists on exact timestamps."""
    if not bars_1 or not bars_2:
        raise DataError("cannot align an empty bar series")
    timestamps: list[datetime] = []
    raw_1: list[float] = []
    raw_2: list[float] = []
    i = j = 0
    while i < len(bars_1) and j < len(bars_2):
        t1, t2 = bars_1[i].timestamp, bars_2[j].timestamp
        if t1 == t2:
            timestamps.append(t1)
            raw_1.append(bars_1[i].price)
            raw_2.append(bars_2[j].price)
            i += 1
            j += 1
        elif t1 < t2:
            i += 1
        else:
            j += 1
    if not timestamps:
        raise AlignmentError("the two series share no timestamps")
    a1 = np.asarray(raw_1)
    a2 = np.asarray(raw_2)
    return AlignedPairSeries(
        timestamps=timestamps,
        raw_1=a1,
        raw_2=a2,
        log_1=np.log(a1),
        log_2=np.log(a2),
        trading_day=[ts.date() for ts in timestamps],
    )
