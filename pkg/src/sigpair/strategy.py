"""Signal generation, filtering, sizing and execution for the four
pair-trading variants.

The raw signal is the classic Z-score rule: short asset 1 / long asset 2
above the buy threshold, the mirror trade below the sell threshold, close
when the Z-score crosses zero against the entry side.  The variants differ
only in which indicator filter must additionally admit an entry; exits are
never filtered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

import numpy as np

from .data_io import AlignedPairSeries
from .errors import ConfigError, ContractError, SizingError
from .indicators import FrameRow, IndicatorConfig, IndicatorFrame


class Variant(str, Enum):
    NO_SIG = "NO_SIG"
    SIG = "SIG"
    SE_SIG = "SE_SIG"
    SE_SIG_DIFF = "SE_SIG_DIFF"


class Signal(Enum):
    ENTER_SHORT1_LONG2 = "enter_short1_long2"
    ENTER_LONG1_SHORT2 = "enter_long1_short2"
    EXIT_TO_FLAT = "exit_to_flat"
    HOLD = "hold"


ENTRY_SIGNALS = (Signal.ENTER_SHORT1_LONG2, Signal.ENTER_LONG1_SHORT2)


class PositionState(Enum):
    FLAT = "flat"
    SHORT1_LONG2 = "short1_long2"
    LONG1_SHORT2 = "long1_short2"


@dataclass(frozen=True)
class StrategyConfig:
    variant: Variant = Variant.NO_SIG
    buy_threshold: float = 2.0
    sell_threshold: float = -2.0
    fee_bps: float = 0.0
    initial_balance: float = 1_000_000.0
    lot_mode: str = "fractional"        # or "integer"
    session_mode: str = "continuous"    # or "per_day"
    indicator: IndicatorConfig = field(default_factory=IndicatorConfig)

    def __post_init__(self):
        if self.buy_threshold <= self.sell_threshold:
            raise ConfigError(
                f"buy_threshold ({self.buy_threshold}) must exceed "
                f"sell_threshold ({self.sell_threshold})"
            )
        if self.fee_bps < 0:
            raise ConfigError(f"fee_bps must be nonnegative, got {self.fee_bps}")
        if self.initial_balance <= 0:
            raise ConfigError(f"initial_balance must be positive, got {self.initial_balance}")
        if self.lot_mode not in ("fractional", "integer"):
            raise ConfigError(f"unknown lot_mode: {self.lot_mode!r}")
        if self.session_mode not in ("continuous", "per_day"):
            raise ConfigError(f"unknown session_mode: {self.session_mode!r}")


@dataclass
class Position:
    state: PositionState = PositionState.FLAT
    lots_1: float = 0.0
    lots_2: float = 0.0
    entry_timestamp: datetime | None = None
    entry_prices: tuple[float, float] | None = None


@dataclass(frozen=True)
class Order:
    timestamp: datetime
    symbol: str
    side: str           # "buy" or "sell"
    lots: float         # always positive; side carries the direction
    price: float
    fee: float


@dataclass(frozen=True)
class RoundTrip:
    entry_timestamp: datetime
    exit_timestamp: datetime
    pnl: float          # gross of fees


@dataclass
class TradeLedger:
    orders: list[Order]
    round_trips: list[RoundTrip]
    count: int          # entry events + exit events


@dataclass(frozen=True)
class EquityCurve:
    timestamps: list[datetime]
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.timestamps)


def raw_pair_signal(z: float, state: PositionState, cfg: StrategyConfig) -> Signal:
    """Unfiltered Z-score signal given the current position state.

    NaN (warm-up or flat spread) always holds.  While flat, threshold
    breaches open a position; while open, a zero crossing against the entry
    side exits and an opposite-threshold breach flips.
    """
    if z is None or math.isnan(z):
        return Signal.HOLD
    if state == PositionState.FLAT:
        if z > cfg.buy_threshold:
            return Signal.ENTER_SHORT1_LONG2
        if z < cfg.sell_threshold:
            return Signal.ENTER_LONG1_SHORT2
        return Signal.HOLD
    if state == PositionState.SHORT1_LONG2:
        if z < cfg.sell_threshold:
            return Signal.ENTER_LONG1_SHORT2
        if z < 0.0:
            return Signal.EXIT_TO_FLAT
        return Signal.HOLD
    # LONG1_SHORT2: entered below the sell threshold
    if z > cfg.buy_threshold:
        return Signal.ENTER_SHORT1_LONG2
    if z > 0.0:
        return Signal.EXIT_TO_FLAT
    return Signal.HOLD


def _present(x: float) -> bool:
    return not math.isnan(x)


def apply_filters(signal: Signal, row: FrameRow, variant: Variant) -> Signal:
    """Gate an entry signal through the variant's indicator filter.

    Exits and holds pass untouched.  A filter whose inputs are not yet
    present blocks the entry (no information, no new risk).
    """
    if signal not in ENTRY_SIGNALS or variant == Variant.NO_SIG:
        return signal
    if variant == Variant.SIG:
        ok = _present(row.sig) and _present(row.hist_mean_sig) and row.sig < row.hist_mean_sig
    else:
        ok = (
            _present(row.seg_sig)
            and _present(row.hist_mean_seg)
            and row.seg_sig < row.hist_mean_seg
        )
        if variant == Variant.SE_SIG_DIFF:
            ok = ok and _present(row.diff_prod) and row.diff_prod > 0.0
    return signal if ok else Signal.HOLD


def size_position(price_1: float, price_2: float, budget: float, lot_mode: str) -> tuple[float, float]:
    """Lots per leg so that each carries half the budget as notional.

    Integer mode rounds to whole lots (at least one) and fails when the
    budget cannot cover a single lot of either asset.
    """
    if price_1 <= 0 or price_2 <= 0:
        raise ValueError("prices must be positive")
    if budget <= 0:
        raise ValueError("budget must be positive")
    half = budget / 2.0
    if lot_mode == "fractional":
        return half / price_1, half / price_2
    if lot_mode != "integer":
        raise ConfigError(f"unknown lot_mode: {lot_mode!r}")
    if budget < price_1 or budget < price_2:
        raise SizingError(
            f"budget {budget} cannot cover one lot at prices ({price_1}, {price_2})"
        )
    return float(max(1, round(half / price_1))), float(max(1, round(half / price_2)))


def run_backtest(
    series: AlignedPairSeries,
    frame: IndicatorFrame,
    cfg: StrategyConfig,
    symbols: tuple[str, str] = ("asset1", "asset2"),
) -> tuple[TradeLedger, EquityCurve]:
    """Single-pass execution of one variant over an aligned pair.

    Entries are sized to balance notional against the cash available at the
    entry bar and execute at that bar's raw prices.  An opposite-side entry
    while positioned closes first and re-enters (two count events).  Open
    positions are liquidated on the final bar, and in per_day mode on the
    last bar of every day, so every entry is matched by an exit.
    """
    n = len(series)
    if len(frame) != n:
        raise ContractError(f"frame has {len(frame)} rows, series has {n}")

    fee_rate = cfg.fee_bps * 1e-4
    cash = cfg.initial_balance
    pos = Position()
    orders: list[Order] = []
    round_trips: list[RoundTrip] = []
    entries = exits = 0
    equity = np.empty(n)

    is_last_bar = np.zeros(n, dtype=bool)
    is_last_bar[n - 1] = True
    if cfg.session_mode == "per_day":
        for i in range(n - 1):
            if series.trading_day[i] != series.trading_day[i + 1]:
                is_last_bar[i] = True

    def execute(ts, symbol, side, lots, price):
        nonlocal cash
        fee = fee_rate * lots * price
        cash -= fee
        orders.append(Order(ts, symbol, side, lots, price, fee))

    for i in range(n):
        ts = series.timestamps[i]
        p1 = float(series.raw_1[i])
        p2 = float(series.raw_2[i])

        entry_signal = None
        exit_now = False
        if is_last_bar[i]:
            exit_now = pos.state != PositionState.FLAT
        else:
            signal = raw_pair_signal(float(frame.z[i]), pos.state, cfg)
            if signal == Signal.EXIT_TO_FLAT:
                exit_now = True
            elif signal in ENTRY_SIGNALS:
                if pos.state != PositionState.FLAT:
                    exit_now = True  # opposite-threshold flip closes first
                filtered = apply_filters(signal, frame.row(i), cfg.variant)
                if filtered in ENTRY_SIGNALS:
                    entry_signal = filtered

        if exit_now:
            ep1, ep2 = pos.entry_prices
            pnl = pos.lots_1 * (p1 - ep1) + pos.lots_2 * (p2 - ep2)
            cash += pos.lots_1 * p1 + pos.lots_2 * p2
            execute(ts, symbols[0], "buy" if pos.lots_1 < 0 else "sell", abs(pos.lots_1), p1)
            execute(ts, symbols[1], "buy" if pos.lots_2 < 0 else "sell", abs(pos.lots_2), p2)
            round_trips.append(RoundTrip(pos.entry_timestamp, ts, pnl))
            exits += 1
            pos = Position()

        if entry_signal is not None and pos.state == PositionState.FLAT:
            lots_1, lots_2 = size_position(p1, p2, cash, cfg.lot_mode)
            if entry_signal == Signal.ENTER_SHORT1_LONG2:
                lots_1, state = -lots_1, PositionState.SHORT1_LONG2
            else:
                lots_2, state = -lots_2, PositionState.LONG1_SHORT2
            cash -= lots_1 * p1 + lots_2 * p2
            execute(ts, symbols[0], "buy" if lots_1 > 0 else "sell", abs(lots_1), p1)
            execute(ts, symbols[1], "buy" if lots_2 > 0 else "sell", abs(lots_2), p2)
            entries += 1
            pos = Position(
                state=state,
                lots_1=lots_1,
                lots_2=lots_2,
                entry_timestamp=ts,
                entry_prices=(p1, p2),
            )

        equity[i] = cash + pos.lots_1 * p1 + pos.lots_2 * p2

    ledger = TradeLedger(orders=orders, round_trips=round_trips, count=entries + exits)
    return ledger, EquityCurve(timestamps=list(series.timestamps), values=equity)


def write_ledger_csv(ledger: TradeLedger, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("timestamp,symbol,side,lots,price,fee\n")
        for o in ledger.orders:
            fh.write(
                f"{o.timestamp.isoformat(timespec='minutes')},{o.symbol},{o.side},"
                f"{o.lots!r},{o.price!r},{o.fee!r}\n"
            )
