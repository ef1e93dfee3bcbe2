"""Exception hierarchy and the process exit codes the CLI maps them to."""

from __future__ import annotations

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CORRUPTION = 3
EXIT_CAPACITY = 4
EXIT_IO = 5


class StieltjesError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class DomainError(StieltjesError):
    """Argument outside the supported mathematical domain (pole, s <= 0, ...)."""

    exit_code = EXIT_USAGE


class CapacityError(StieltjesError):
    """Requested result is not certifiable at the available precision.

    Raised when n exceeds the cutoff k0, or when a result would carry
    zero guaranteed digits.  The message names the remedy (more digits).
    """

    exit_code = EXIT_CAPACITY


class CorruptionError(StieltjesError):
    """A node table failed the finite-difference corruption scan."""

    exit_code = EXIT_CORRUPTION

    def __init__(self, message: str, flagged: dict[int, list[tuple[int, int]]]):
        super().__init__(message)
        self.flagged = flagged


class FormatError(StieltjesError):
    """Malformed or inconsistent data file; names the offending line."""

    exit_code = EXIT_IO
