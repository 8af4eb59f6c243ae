from datetime import datetime, timedelta

import numpy as np
import pytest

from sigpair import (
    AlignedPairSeries,
    IndicatorConfig,
    PositionState,
    Signal,
    StrategyConfig,
    Variant,
    apply_filters,
    compute_frame,
    raw_pair_signal,
    run_backtest,
    size_position,
)
from sigpair.errors import ConfigError, ContractError, SizingError
from sigpair.indicators import FrameRow, IndicatorFrame

START = datetime(2024, 11, 1, 9, 0)
NAN = float("nan")


def make_series(raw_1, raw_2, minutes_per_day=None):
    raw_1 = np.asarray(raw_1, dtype=np.float64)
    raw_2 = np.asarray(raw_2, dtype=np.float64)
    n = len(raw_1)
    if minutes_per_day is None:
        stamps = [START + timedelta(minutes=i) for i in range(n)]
    else:
        stamps = [
            START + timedelta(days=i // minutes_per_day, minutes=i % minutes_per_day)
            for i in range(n)
        ]
    return AlignedPairSeries(
        timestamps=stamps,
        raw_1=raw_1,
        raw_2=raw_2,
        log_1=np.log(raw_1),
        log_2=np.log(raw_2),
        trading_day=[t.date() for t in stamps],
    )


def make_frame(series, z, **columns):
    n = len(series)
    cols = {
        name: np.asarray(columns.get(name, np.full(n, np.nan)), dtype=np.float64)
        for name in ("sig", "seg_sig", "diff_prod", "hist_mean_sig", "hist_mean_seg")
    }
    return IndicatorFrame(
        timestamps=list(series.timestamps),
        spread=series.raw_1 - series.raw_2,
        z=np.asarray(z, dtype=np.float64),
        **cols,
    )


def row(**kw):
    defaults = dict(spread=0.0, z=0.0, sig=NAN, seg_sig=NAN, diff_prod=NAN,
                    hist_mean_sig=NAN, hist_mean_seg=NAN)
    defaults.update(kw)
    return FrameRow(**defaults)


class TestRawPairSignal:
    cfg = StrategyConfig()

    def test_above_buy_threshold_shorts_asset1(self):
        assert raw_pair_signal(2.5, PositionState.FLAT, self.cfg) == Signal.ENTER_SHORT1_LONG2

    def test_below_sell_threshold_longs_asset1(self):
        assert raw_pair_signal(-2.5, PositionState.FLAT, self.cfg) == Signal.ENTER_LONG1_SHORT2

    def test_warmup_holds(self):
        assert raw_pair_signal(NAN, PositionState.FLAT, self.cfg) == Signal.HOLD

    def test_between_thresholds_holds_when_flat(self):
        assert raw_pair_signal(1.5, PositionState.FLAT, self.cfg) == Signal.HOLD

    def test_zero_crossing_exits(self):
        assert raw_pair_signal(-0.2, PositionState.SHORT1_LONG2, self.cfg) == Signal.EXIT_TO_FLAT
        assert raw_pair_signal(0.2, PositionState.LONG1_SHORT2, self.cfg) == Signal.EXIT_TO_FLAT

    def test_same_side_holds_while_open(self):
        assert raw_pair_signal(2.6, PositionState.SHORT1_LONG2, self.cfg) == Signal.HOLD
        assert raw_pair_signal(0.5, PositionState.SHORT1_LONG2, self.cfg) == Signal.HOLD

    def test_opposite_threshold_flips(self):
        assert raw_pair_signal(-2.4, PositionState.SHORT1_LONG2, self.cfg) == Signal.ENTER_LONG1_SHORT2
        assert raw_pair_signal(2.4, PositionState.LONG1_SHORT2, self.cfg) == Signal.ENTER_SHORT1_LONG2


class TestApplyFilters:
    def test_no_sig_passes_everything(self):
        r = row()
        assert apply_filters(Signal.ENTER_SHORT1_LONG2, r, Variant.NO_SIG) == Signal.ENTER_SHORT1_LONG2

    def test_se_sig_diff_admits_when_both_conditions_hold(self):
        r = row(seg_sig=0.4, hist_mean_seg=0.6, diff_prod=0.02)
        assert apply_filters(Signal.ENTER_LONG1_SHORT2, r, Variant.SE_SIG_DIFF) == Signal.ENTER_LONG1_SHORT2

    def test_se_sig_diff_blocks_negative_diff_product(self):
        r = row(seg_sig=0.4, hist_mean_seg=0.6, diff_prod=-0.01)
        assert apply_filters(Signal.ENTER_LONG1_SHORT2, r, Variant.SE_SIG_DIFF) == Signal.HOLD

    def test_sig_blocks_without_history(self):
        r = row(sig=0.4)
        assert apply_filters(Signal.ENTER_SHORT1_LONG2, r, Variant.SIG) == Signal.HOLD

    def test_sig_requires_value_below_mean(self):
        above = row(sig=0.7, hist_mean_sig=0.6)
        below = row(sig=0.5, hist_mean_sig=0.6)
        assert apply_filters(Signal.ENTER_SHORT1_LONG2, above, Variant.SIG) == Signal.HOLD
        assert apply_filters(Signal.ENTER_SHORT1_LONG2, below, Variant.SIG) == Signal.ENTER_SHORT1_LONG2

    def test_se_sig_uses_segmented_columns(self):
        r = row(seg_sig=0.2, hist_mean_seg=0.5, sig=9.0, hist_mean_sig=1.0)
        assert apply_filters(Signal.ENTER_SHORT1_LONG2, r, Variant.SE_SIG) == Signal.ENTER_SHORT1_LONG2

    def test_exits_always_pass(self):
        r = row()  # every filter input absent
        for variant in Variant:
            assert apply_filters(Signal.EXIT_TO_FLAT, r, variant) == Signal.EXIT_TO_FLAT
            assert apply_filters(Signal.HOLD, r, variant) == Signal.HOLD


class TestSizePosition:
    def test_fractional_equal_notional(self):
        assert size_position(100.0, 50.0, 1000.0, "fractional") == (5.0, 10.0)

    def test_integer_symmetric(self):
        assert size_position(100.0, 100.0, 1000.0, "integer") == (5.0, 5.0)

    def test_integer_rounding(self):
        assert size_position(300.0, 70.0, 1000.0, "integer") == (2.0, 7.0)

    def test_integer_budget_too_small(self):
        with pytest.raises(SizingError):
            size_position(300.0, 70.0, 200.0, "integer")

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            size_position(-1.0, 50.0, 1000.0, "fractional")
        with pytest.raises(ValueError):
            size_position(10.0, 50.0, 0.0, "fractional")


class TestStrategyConfig:
    def test_thresholds_must_be_ordered(self):
        with pytest.raises(ConfigError):
            StrategyConfig(buy_threshold=-1.0, sell_threshold=1.0)

    def test_unknown_modes_rejected(self):
        with pytest.raises(ConfigError):
            StrategyConfig(lot_mode="halves")
        with pytest.raises(ConfigError):
            StrategyConfig(session_mode="weekly")


class TestRunBacktest:
    def test_zero_fee_round_trip_at_same_prices_is_flat(self):
        series = make_series([100.0] * 5, [50.0] * 5)
        frame = make_frame(series, [NAN, 3.0, 1.0, -0.5, NAN])
        ledger, curve = run_backtest(series, frame, StrategyConfig())
        assert ledger.count == 2
        assert len(ledger.orders) == 4
        assert len(ledger.round_trips) == 1
        assert abs(ledger.round_trips[0].pnl) < 1e-10
        assert np.allclose(curve.values, 1_000_000.0, atol=1e-8)

    def test_short1_long2_gains_when_spread_converges(self):
        # enter short asset1 / long asset2, asset1 falls 1%, asset2 rises 1%
        series = make_series([100.0, 100.0, 99.0, 99.0], [50.0, 50.0, 50.5, 50.5])
        frame = make_frame(series, [NAN, 3.0, -0.5, NAN])
        ledger, curve = run_backtest(series, frame, StrategyConfig())
        trip = ledger.round_trips[0]
        lots_1 = 500_000.0 / 100.0
        lots_2 = 500_000.0 / 50.0
        expected = lots_1 * 1.0 + lots_2 * 0.5
        assert trip.pnl == pytest.approx(expected, rel=1e-12)
        assert curve.values[-1] == pytest.approx(1_000_000.0 + expected, rel=1e-12)

    def test_fees_are_charged_per_order_notional(self):
        series = make_series([100.0] * 4, [50.0] * 4)
        frame = make_frame(series, [NAN, 3.0, -0.5, NAN])
        cfg = StrategyConfig(fee_bps=10.0)  # 10 bps per executed notional
        ledger, curve = run_backtest(series, frame, cfg)
        total_fees = sum(o.fee for o in ledger.orders)
        # entry notionals are 500k per leg at entry cash
        assert total_fees == pytest.approx(4 * 500_000.0 * 10e-4, rel=1e-9)
        assert curve.values[-1] == pytest.approx(1_000_000.0 - total_fees, rel=1e-12)

    def test_flip_records_exit_and_entry(self):
        series = make_series([100.0] * 4, [50.0] * 4)
        frame = make_frame(series, [NAN, 3.0, -3.0, NAN])
        ledger, _ = run_backtest(series, frame, StrategyConfig())
        # entry, flip (exit+entry), and final-bar liquidation
        assert ledger.count == 4
        assert len(ledger.round_trips) == 2

    def test_filters_block_all_entries(self):
        series = make_series([100.0] * 5, [50.0] * 5)
        frame = make_frame(series, [NAN, 3.0, 3.0, -0.5, NAN])  # no filter columns present
        ledger, curve = run_backtest(series, frame, StrategyConfig(variant=Variant.SE_SIG))
        assert ledger.count == 0
        assert np.all(curve.values == 1_000_000.0)

    def test_exit_passes_filters(self):
        # enter under NO_SIG then verify SE_SIG_DIFF also exits once entered:
        # same frame, filter columns present only at the entry bar
        series = make_series([100.0] * 5, [50.0] * 5)
        n = 5
        frame = make_frame(
            series,
            [NAN, 3.0, 1.0, -0.5, NAN],
            seg_sig=[NAN, 0.1, NAN, NAN, NAN],
            hist_mean_seg=[NAN, 0.5, NAN, NAN, NAN],
            diff_prod=[NAN, 1.0, NAN, NAN, NAN],
        )
        ledger, _ = run_backtest(series, frame, StrategyConfig(variant=Variant.SE_SIG_DIFF))
        assert ledger.count == 2  # entered at bar 1, exited at bar 3 despite absent filters

    def test_integer_lots_balance_notional(self):
        series = make_series([300.0] * 4, [70.0] * 4)
        frame = make_frame(series, [NAN, 3.0, -0.5, NAN])
        cfg = StrategyConfig(initial_balance=1000.0, lot_mode="integer")
        ledger, _ = run_backtest(series, frame, cfg)
        entry_orders = ledger.orders[:2]
        assert entry_orders[0].lots == 2.0
        assert entry_orders[1].lots == 7.0

    def test_per_day_force_closes_at_day_end(self):
        series = make_series([100.0] * 6, [50.0] * 6, minutes_per_day=3)
        frame = make_frame(series, [NAN, 3.0, 1.0, NAN, NAN, NAN])
        cfg = StrategyConfig(session_mode="per_day")
        ledger, _ = run_backtest(series, frame, cfg)
        assert len(ledger.round_trips) == 1
        exit_ts = ledger.round_trips[0].exit_timestamp
        assert exit_ts == series.timestamps[2]  # last bar of day one

    def test_last_bar_liquidates_open_position(self):
        series = make_series([100.0] * 3, [50.0] * 3)
        frame = make_frame(series, [NAN, 3.0, 2.9])  # never exits by signal
        ledger, curve = run_backtest(series, frame, StrategyConfig())
        assert len(ledger.round_trips) == 1
        assert ledger.round_trips[0].exit_timestamp == series.timestamps[-1]

    def test_cash_conservation_identity(self):
        rng = np.random.default_rng(10)
        n = 400
        raw_1 = 100.0 * np.exp(np.cumsum(rng.normal(0, 0.003, n)))
        raw_2 = raw_1 * np.exp(-0.02 - 0.01 * np.sin(np.arange(n) / 7.0) - rng.normal(0, 0.002, n))
        series = make_series(raw_1, raw_2)
        frame = compute_frame(series, IndicatorConfig(sig_window=10, z_window=10, min_history=5))
        cfg = StrategyConfig(fee_bps=2.0)
        ledger, curve = run_backtest(series, frame, cfg)
        assert ledger.count > 0
        gross = sum(t.pnl for t in ledger.round_trips)
        fees = sum(o.fee for o in ledger.orders)
        expected = cfg.initial_balance + gross - fees
        assert curve.values[-1] == pytest.approx(expected, rel=1e-8)

    def test_run_is_deterministic(self):
        rng = np.random.default_rng(11)
        n = 300
        raw_1 = 100.0 * np.exp(np.cumsum(rng.normal(0, 0.003, n)))
        raw_2 = raw_1 * np.exp(-rng.normal(0.01, 0.004, n))
        series = make_series(raw_1, raw_2)
        frame = compute_frame(series, IndicatorConfig(sig_window=8, z_window=8, min_history=4))
        cfg = StrategyConfig(variant=Variant.SE_SIG_DIFF)
        ledger_a, curve_a = run_backtest(series, frame, cfg)
        ledger_b, curve_b = run_backtest(series, frame, cfg)
        assert ledger_a == ledger_b
        assert np.array_equal(curve_a.values, curve_b.values)

    def test_no_lookahead_truncation(self):
        rng = np.random.default_rng(12)
        n = 240
        raw_1 = 100.0 * np.exp(np.cumsum(rng.normal(0, 0.003, n)))
        raw_2 = raw_1 * np.exp(-0.02 - rng.normal(0, 0.003, n))
        series = make_series(raw_1, raw_2)
        cfg = StrategyConfig(indicator=IndicatorConfig(sig_window=10, z_window=10, min_history=5))
        full_frame = compute_frame(series, cfg.indicator)
        _, full_curve = run_backtest(series, full_frame, cfg)
        full_ledger, _ = run_backtest(series, full_frame, cfg)
        for k in (60, 120, 200):
            prefix = series.restrict(slice(0, k))
            pf = compute_frame(prefix, cfg.indicator)
            pl, pc = run_backtest(prefix, pf, cfg)
            # identical up to the bar before the prefix's forced liquidation
            assert np.array_equal(full_curve.values[: k - 1], pc.values[: k - 1])
            cutoff = series.timestamps[k - 2]
            full_orders = [o for o in full_ledger.orders if o.timestamp <= cutoff]
            prefix_orders = [o for o in pl.orders if o.timestamp <= cutoff]
            assert full_orders == prefix_orders

    def test_open_legs_are_always_opposite(self):
        rng = np.random.default_rng(13)
        n = 300
        raw_1 = 100.0 * np.exp(np.cumsum(rng.normal(0, 0.004, n)))
        raw_2 = raw_1 * np.exp(-0.01 - rng.normal(0, 0.003, n))
        series = make_series(raw_1, raw_2)
        frame = compute_frame(series, IndicatorConfig(sig_window=8, z_window=8, min_history=4))
        ledger, _ = run_backtest(series, frame, StrategyConfig())
        # reconstruct leg sign per event from the order stream
        for a, b in zip(ledger.orders[::2], ledger.orders[1::2]):
            assert a.timestamp == b.timestamp
            assert {a.side, b.side} == {"buy", "sell"}

    def test_frame_series_mismatch_raises(self):
        series = make_series([100.0] * 4, [50.0] * 4)
        frame = make_frame(series.restrict(slice(0, 3)), [NAN, 3.0, NAN])
        with pytest.raises(ContractError):
            run_backtest(series, frame, StrategyConfig())

    def test_signal_level_filter_monotonicity(self):
        rng = np.random.default_rng(14)
        n = 500
        raw_1 = 100.0 * np.exp(np.cumsum(rng.normal(0, 0.003, n)))
        raw_2 = raw_1 * np.exp(-0.02 - 0.015 * np.sin(np.arange(n) / 11.0) - rng.normal(0, 0.002, n))
        series = make_series(raw_1, raw_2)
        frame = compute_frame(series, IndicatorConfig(sig_window=12, z_window=12, min_history=6))
        cfg = StrategyConfig()
        admitted = {v: set() for v in Variant}
        for i in range(n):
            signal = raw_pair_signal(float(frame.z[i]), PositionState.FLAT, cfg)
            if signal not in (Signal.ENTER_SHORT1_LONG2, Signal.ENTER_LONG1_SHORT2):
                continue
            for v in Variant:
                if apply_filters(signal, frame.row(i), v) == signal:
                    admitted[v].add(i)
        assert admitted[Variant.SE_SIG_DIFF] <= admitted[Variant.SE_SIG] <= admitted[Variant.NO_SIG]
        assert admitted[Variant.SIG] <= admitted[Variant.NO_SIG]
