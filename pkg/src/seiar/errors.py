"""Exception types shared across the package."""

from __future__ import annotations


class IntegrationError(RuntimeError):
    """Numerical integration failed; ``t`` is the time of failure."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (at t = {t:g})")
        self.t = t


class ConfigError(ValueError):
    """Run configuration is malformed or inconsistent."""


class DataError(ValueError):
    """Observed-series file violates the expected schema.

    ``line`` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FitError(RuntimeError):
    """Calibration could not produce a usable result."""
