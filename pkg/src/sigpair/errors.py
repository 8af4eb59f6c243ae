"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: ConfigError -> 2, DataError (and
subclasses) -> 3, any other SigpairError -> 4.
"""


class SigpairError(Exception):
    """Base class for all package errors."""


class ConfigError(SigpairError):
    """Invalid configuration file, flag, or parameter combination."""


class DataError(SigpairError):
    """Input data violates a contract (ordering, positivity, alignment)."""


class ParseError(DataError):
    """Malformed input row; message carries the 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class AlignmentError(DataError):
    """Two bar series share no timestamps."""


class SizingError(SigpairError):
    """Budget cannot cover one integer lot of each leg."""


class ContractError(SigpairError):
    """Caller broke an internal precondition (e.g. frame/series mismatch)."""


class UndefinedCVError(SigpairError):
    """Coefficient of variation undefined: mean is zero or negative."""


class UndefinedSharpeError(SigpairError):
    """Sharpe ratio undefined: fewer than two returns or zero dispersion."""
