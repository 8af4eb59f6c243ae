"""Level-2 path-signature features as entry filters on a Z-score
pair-trading backtest: Levy area, segmented signature, and the lagged
path-difference product over paired futures minute bars."""

from .data_io import AlignedPairSeries, MinuteBar, align_pair, load_bars
from .indicators import (
    IndicatorConfig,
    IndicatorFrame,
    coefficient_of_variation,
    compute_frame,
    diff_product,
    expanding_mean,
    windowed_segmented,
    windowed_signature,
    z_score,
)
from .metrics import (
    BacktestReport,
    build_report,
    emit_report,
    max_drawdown,
    mean_daily_return,
    overall_return,
    sharpe,
)
from .path_core import (
    Level2Signature,
    Path2D,
    chen_concat,
    decompose,
    level1,
    level2,
    total_variation,
)
from .segmented import SegmentedLevyArea, chord_crossings, segmented_levy
from .strategy import (
    EquityCurve,
    Position,
    PositionState,
    Signal,
    StrategyConfig,
    TradeLedger,
    Variant,
    apply_filters,
    raw_pair_signal,
    run_backtest,
    size_position,
)
from .synth import SpreadParams, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AlignedPairSeries",
    "BacktestReport",
    "EquityCurve",
    "IndicatorConfig",
    "IndicatorFrame",
    "Level2Signature",
    "MinuteBar",
    "Path2D",
    "Position",
    "PositionState",
    "SegmentedLevyArea",
    "Signal",
    "SpreadParams",
    "StrategyConfig",
    "TradeLedger",
    "Variant",
    "align_pair",
    "apply_filters",
    "build_report",
    "chen_concat",
    "chord_crossings",
    "coefficient_of_variation",
    "compute_frame",
    "decompose",
    "diff_product",
    "emit_report",
    "expanding_mean",
    "generate_synthetic",
    "level1",
    "level2",
    "load_bars",
    "max_drawdown",
    "mean_daily_return",
    "overall_return",
    "raw_pair_signal",
    "run_backtest",
    "segmented_levy",
    "sharpe",
    "size_position",
    "total_variation",
    "windowed_segmented",
    "windowed_signature",
    "z_score",
]
