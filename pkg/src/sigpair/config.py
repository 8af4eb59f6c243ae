"""Run configuration: a flat ``key = value`` file plus flag overrides.

Blank lines and lines starting with ``#`` are ignored.  Flags win over file
values, which win over defaults.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .indicators import IndicatorConfig
from .strategy import StrategyConfig, Variant


@dataclass(frozen=True)
class RunConfig:
    asset_1_file: str | None
    asset_2_file: str | None
    symbols: tuple[str, str]
    strategy: StrategyConfig
    output_dir: str
    seed: int | None
    risk_free_annual: float


def _parse_variant(text: str) -> Variant:
    try:
        return Variant(text.strip().upper().replace("-", "_"))
    except ValueError:
        choices = ", ".join(v.value for v in Variant)
        raise ConfigError(f"unknown variant {text!r} (choices: {choices})")


def _parse_float(key):
    def parse(text):
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {text!r}")
    return parse


def _parse_int(key):
    def parse(text):
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {text!r}")
    return parse


_KEY_PARSERS = {
    "asset_1_file": str,
    "asset_2_file": str,
    "symbol_1": str,
    "symbol_2": str,
    "output_dir": str,
    "seed": _parse_int("seed"),
    "variant": _parse_variant,
    "buy_threshold": _parse_float("buy_threshold"),
    "sell_threshold": _parse_float("sell_threshold"),
    "fee_bps": _parse_float("fee_bps"),
    "initial_balance": _parse_float("initial_balance"),
    "lot_mode": str,
    "session_mode": str,
    "sig_window": _parse_int("sig_window"),
    "z_window": _parse_int("z_window"),
    "min_history": _parse_int("min_history"),
    "risk_free_annual": _parse_float("risk_free_annual"),
}

CONFIG_KEYS = tuple(_KEY_PARSERS)


def read_config_file(path: str) -> dict:
    """Parse a flat key = value file into typed settings."""
    settings: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {line_no}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEY_PARSERS:
            raise ConfigError(f"{path}: line {line_no}: unknown config key: {key}")
        settings[key] = _KEY_PARSERS[key](value)
    return settings


def parse_config(file_path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from defaults, an optional file, and flag overrides.

    ``overrides`` uses the same key names as the file; None values are
    treated as unset.
    """
    settings: dict = {}
    if file_path is not None:
        settings.update(read_config_file(file_path))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _KEY_PARSERS:
            raise ConfigError(f"unknown config key: {key}")
        settings[key] = _KEY_PARSERS[key](value) if isinstance(value, str) else value

    indicator = IndicatorConfig(
        sig_window=settings.get("sig_window", 60),
        z_window=settings.get("z_window", 60),
        min_history=settings.get("min_history", 30),
    )
    strategy = StrategyConfig(
        variant=settings.get("variant", Variant.NO_SIG),
        buy_threshold=settings.get("buy_threshold", 2.0),
        sell_threshold=settings.get("sell_threshold", -2.0),
        fee_bps=settings.get("fee_bps", 0.0),
        initial_balance=settings.get("initial_balance", 1_000_000.0),
        lot_mode=settings.get("lot_mode", "fractional"),
        session_mode=settings.get("session_mode", "continuous"),
        indicator=indicator,
    )
    return RunConfig(
        asset_1_file=settings.get("asset_1_file"),
        asset_2_file=settings.get("asset_2_file"),
        symbols=(settings.get("symbol_1", "asset1"), settings.get("symbol_2", "asset2")),
        strategy=strategy,
        output_dir=settings.get("output_dir", "out"),
        seed=settings.get("seed"),
        risk_free_annual=settings.get("risk_free_annual", 0.0),
    )
