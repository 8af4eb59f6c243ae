"""Performance metrics over an equity curve and ledger, plus report output:
a delimited metrics table, per-variant equity curves, and a cumulative
balance chart rendered to SVG.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, UndefinedSharpeError
from .strategy import EquityCurve, TradeLedger

TRADING_DAYS_PER_YEAR = 252
METRICS_HEADER = "variant,overall_return,mean_daily_return,max_drawdown,std,sharpe,count"


@dataclass(frozen=True)
class BacktestReport:
    """The six headline measures for one strategy variant.

    overall_return and mean_daily_return are fractions; max_drawdown is a
    nonpositive fraction; daily_std is the sample deviation of daily returns
    in percent; sharpe is NaN when undefined (zero dispersion).
    """

    variant: str
    overall_return: float
    mean_daily_return: float
    max_drawdown: float
    daily_std: float
    sharpe: float
    count: int
    equity: EquityCurve


def overall_return(equity_values) -> float:
    """Net profit over the initial balance: last/first - 1."""
    values = np.asarray(equity_values, dtype=np.float64)
    if values.size == 0:
        raise ContractError("empty equity curve")
    if values[0] <= 0:
        raise ContractError("equity curve must start positive")
    return float(values[-1] / values[0] - 1.0)


def mean_daily_return(overall: float, n_days: int) -> float:
    """Overall return spread arithmetically over the observed trading days."""
    if n_days < 1:
        raise ContractError(f"n_days must be >= 1, got {n_days}")
    return overall / n_days


def max_drawdown(equity_values) -> float:
    """Deepest decline from a running peak, as a nonpositive fraction."""
    values = np.asarray(equity_values, dtype=np.float64)
    if values.size == 0:
        raise ContractError("empty equity curve")
    running_max = np.maximum.accumulate(values)
    return float(np.min(values / running_max - 1.0))


def sharpe(daily_returns, risk_free_annual: float = 0.0) -> float:
    """Annualized Sharpe ratio of daily returns against a flat annual rate.

    mean(excess) / sample-std(returns) * sqrt(252), with the daily risk-free
    rate taken as risk_free_annual / 252.  Raises when there are fewer than
    two returns or the dispersion is zero.
    """
    r = np.asarray(daily_returns, dtype=np.float64)
    if r.size < 2:
        raise UndefinedSharpeError("need at least two daily returns")
    mu = float(r.mean())
    std = float(r.std(ddof=1))
    if std < 1e-15 * max(1.0, abs(mu)):
        raise UndefinedSharpeError("zero dispersion in daily returns")
    excess = mu - risk_free_annual / TRADING_DAYS_PER_YEAR
    return excess / std * math.sqrt(TRADING_DAYS_PER_YEAR)


def daily_return_series(curve: EquityCurve) -> np.ndarray:
    """Day-over-day returns of end-of-day equity.

    The first day's return is measured against the curve's opening value.
    """
    if len(curve) == 0:
        raise ContractError("empty equity curve")
    closes = []
    for i in range(len(curve)):
        last_of_day = i + 1 == len(curve) or (
            curve.timestamps[i + 1].date() != curve.timestamps[i].date()
        )
        if last_of_day:
            closes.append(curve.values[i])
    closes = np.asarray(closes)
    base = np.concatenate([[curve.values[0]], closes[:-1]])
    return closes / base - 1.0


def build_report(
    variant: str,
    curve: EquityCurve,
    ledger: TradeLedger,
    risk_free_annual: float = 0.0,
) -> BacktestReport:
    """Assemble the six measures for one finished run."""
    overall = overall_return(curve.values)
    n_days = len({ts.date() for ts in curve.timestamps})
    daily = daily_return_series(curve)
    daily_std = float(daily.std(ddof=1)) * 100.0 if daily.size >= 2 else float("nan")
    try:
        sharpe_value = sharpe(daily, risk_free_annual)
    except UndefinedSharpeError:
        sharpe_value = float("nan")
    return BacktestReport(
        variant=variant,
        overall_return=overall,
        mean_daily_return=mean_daily_return(overall, n_days),
        max_drawdown=max_drawdown(curve.values),
        daily_std=daily_std,
        sharpe=sharpe_value,
        count=ledger.count,
        equity=curve,
    )


def _cell(x: float) -> str:
    return "" if math.isnan(x) else repr(x)


def write_equity_csv(curve: EquityCurve, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("timestamp,equity\n")
        for ts, value in zip(curve.timestamps, curve.values):
            fh.write(f"{ts.isoformat(timespec='minutes')},{float(value)!r}\n")


def read_metrics_csv(path: str) -> list[dict]:
    """Read back a metrics table; empty cells become NaN."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {
                    "variant": rec["variant"],
                    "overall_return": float(rec["overall_return"]) if rec["overall_return"] else float("nan"),
                    "mean_daily_return": float(rec["mean_daily_return"]) if rec["mean_daily_return"] else float("nan"),
                    "max_drawdown": float(rec["max_drawdown"]) if rec["max_drawdown"] else float("nan"),
                    "std": float(rec["std"]) if rec["std"] else float("nan"),
                    "sharpe": float(rec["sharpe"]) if rec["sharpe"] else float("nan"),
                    "count": int(rec["count"]),
                }
            )
    return rows


def _plot_cumulative_balance(reports: list[BacktestReport], path: str) -> None:
    # Agg + a fixed hash salt and no Date metadata keep the SVG bytes
    # reproducible run to run.
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "sigpair"}):
        fig, ax = plt.subplots(figsize=(10.0, 6.0))
        for rep in reports:
            ax.plot(
                rep.equity.timestamps,
                rep.equity.values,
                label=rep.variant.replace("_", "-"),
                linewidth=1.0,
            )
        ax.set_title("Cumulative balance")
        ax.set_xlabel("time")
        ax.set_ylabel("balance")
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.autofmt_xdate()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def emit_report(reports: list[BacktestReport], out_dir: str) -> list[str]:
    """Write metrics.csv, one equity CSV per variant, and the balance chart.

    Returns the paths written, metrics table first.
    """
    if not reports:
        raise ContractError("emit_report needs at least one report")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    metrics_path = os.path.join(out_dir, "metrics.csv")
    with open(metrics_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(METRICS_HEADER + "\n")
        for rep in reports:
            fh.write(
                f"{rep.variant},{_cell(rep.overall_return)},{_cell(rep.mean_daily_return)},"
                f"{_cell(rep.max_drawdown)},{_cell(rep.daily_std)},{_cell(rep.sharpe)},{rep.count}\n"
            )
    written.append(metrics_path)

    for rep in reports:
        equity_path = os.path.join(out_dir, f"equity_{rep.variant.lower()}.csv")
        write_equity_csv(rep.equity, equity_path)
        written.append(equity_path)

    svg_path = os.path.join(out_dir, "cumulative_balance.svg")
    _plot_cumulative_balance(reports, svg_path)
    written.append(svg_path)
    return written
