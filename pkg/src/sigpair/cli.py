"""Command-line entry point.

Subcommands: ``synth`` writes a seeded synthetic pair, ``indicators`` dumps
the per-timestamp indicator frame, ``backtest`` runs one variant, and
``compare`` runs all four variants off a single shared indicator frame.
Exit codes: 0 success, 2 config error, 3 data error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .config import RunConfig, parse_config
from .data_io import align_pair, load_bars
from .errors import ConfigError, DataError, SigpairError, UndefinedCVError
from .indicators import coefficient_of_variation, compute_frame, write_frame_csv
from .metrics import build_report, emit_report
from .strategy import Variant, run_backtest, write_ledger_csv
from .synth import BaseParams, SpreadParams, generate_synthetic

VARIANT_ORDER = (Variant.NO_SIG, Variant.SIG, Variant.SE_SIG, Variant.SE_SIG_DIFF)


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="path to a key = value config file")
    sub.add_argument("--asset1", help="first asset's minute-bar CSV")
    sub.add_argument("--asset2", help="second asset's minute-bar CSV")
    sub.add_argument("--out", help="output directory (default: out)")
    sub.add_argument("--seed", type=int, help="seed recorded in the run config")


def _run_config(args, variant_flag: str | None = None) -> RunConfig:
    overrides = {
        "asset_1_file": args.asset1,
        "asset_2_file": args.asset2,
        "output_dir": args.out,
        "seed": args.seed,
    }
    if variant_flag is not None:
        overrides["variant"] = variant_flag
    return parse_config(args.config, overrides)


def _load_series(cfg: RunConfig):
    if not cfg.asset_1_file or not cfg.asset_2_file:
        raise ConfigError("asset_1_file and asset_2_file are required (flags --asset1/--asset2)")
    bars_1 = load_bars(cfg.asset_1_file, cfg.symbols[0])
    bars_2 = load_bars(cfg.asset_2_file, cfg.symbols[1])
    return align_pair(bars_1, bars_2)


def _cmd_synth(args) -> None:
    out_dir = args.out or "out"
    spread = SpreadParams(
        reversion_rate=args.ou_rate,
        volatility=args.ou_vol,
        mean=args.ou_mean,
    )
    base = BaseParams()
    paths = generate_synthetic(
        seed=args.seed if args.seed is not None else 42,
        n_days=args.days,
        minutes_per_day=args.minutes,
        spread_params=spread,
        base_params=base,
        out_dir=out_dir,
        symbols=(args.symbol1, args.symbol2),
    )
    for path in paths:
        print(f"wrote {path}")


def _cmd_indicators(args) -> None:
    cfg = _run_config(args)
    series = _load_series(cfg)
    frame = compute_frame(series, cfg.strategy.indicator, cfg.strategy.session_mode)
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "indicators.csv")
    write_frame_csv(frame, path)
    print(f"wrote {path}")
    for label, column, shift in (
        ("signature", frame.sig, True),
        ("segmented signature", frame.seg_sig, False),
    ):
        try:
            cv = coefficient_of_variation(column, shift_to_positive=shift)
        except UndefinedCVError:
            continue
        print(f"coefficient of variation ({label}): {cv:.4f}")


def _cmd_backtest(args) -> None:
    cfg = _run_config(args, variant_flag=args.variant)
    series = _load_series(cfg)
    frame = compute_frame(series, cfg.strategy.indicator, cfg.strategy.session_mode)
    ledger, curve = run_backtest(series, frame, cfg.strategy, symbols=cfg.symbols)
    os.makedirs(cfg.output_dir, exist_ok=True)
    variant = cfg.strategy.variant
    ledger_path = os.path.join(cfg.output_dir, f"ledger_{variant.value.lower()}.csv")
    write_ledger_csv(ledger, ledger_path)
    report = build_report(variant.value, curve, ledger, cfg.risk_free_annual)
    written = emit_report([report], cfg.output_dir)
    for path in [ledger_path] + written:
        print(f"wrote {path}")


def _cmd_compare(args) -> None:
    cfg = _run_config(args)
    series = _load_series(cfg)
    # one frame feeds all four variants; only the filters differ
    frame = compute_frame(series, cfg.strategy.indicator, cfg.strategy.session_mode)
    os.makedirs(cfg.output_dir, exist_ok=True)
    reports = []
    ledger_paths = []
    for variant in VARIANT_ORDER:
        strat = dataclasses.replace(cfg.strategy, variant=variant)
        ledger, curve = run_backtest(series, frame, strat, symbols=cfg.symbols)
        ledger_path = os.path.join(cfg.output_dir, f"ledger_{variant.value.lower()}.csv")
        write_ledger_csv(ledger, ledger_path)
        ledger_paths.append(ledger_path)
        reports.append(build_report(variant.value, curve, ledger, cfg.risk_free_annual))
    written = emit_report(reports, cfg.output_dir)
    for path in ledger_paths + written:
        print(f"wrote {path}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigpair",
        description="Signature-filtered pair-trading backtests over minute bars",
    )
    sub = parser.add_subparsers(dest="command")

    p_synth = sub.add_parser("synth", help="generate a seeded synthetic pair")
    p_synth.add_argument("--out", help="output directory (default: out)")
    p_synth.add_argument("--seed", type=int, default=42)
    p_synth.add_argument("--days", type=int, default=43)
    p_synth.add_argument("--minutes", type=int, default=345, help="bars per trading day")
    p_synth.add_argument("--symbol1", default="SYN1")
    p_synth.add_argument("--symbol2", default="SYN2")
    p_synth.add_argument("--ou-rate", type=float, default=SpreadParams.reversion_rate)
    p_synth.add_argument("--ou-vol", type=float, default=SpreadParams.volatility)
    p_synth.add_argument("--ou-mean", type=float, default=SpreadParams.mean)
    p_synth.set_defaults(func=_cmd_synth)

    p_ind = sub.add_parser("indicators", help="dump the per-timestamp indicator frame")
    _add_common_flags(p_ind)
    p_ind.set_defaults(func=_cmd_indicators)

    p_bt = sub.add_parser("backtest", help="run one strategy variant")
    _add_common_flags(p_bt)
    p_bt.add_argument(
        "--variant",
        choices=[v.value.lower() for v in VARIANT_ORDER],
        help="strategy variant (default from config, else no_sig)",
    )
    p_bt.set_defaults(func=_cmd_backtest)

    p_cmp = sub.add_parser("compare", help="run all four variants on one pair")
    _add_common_flags(p_cmp)
    p_cmp.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return 2
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (SigpairError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
