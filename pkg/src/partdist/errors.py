"""Exception hierarchy shared across the package.

Three failure classes are distinguished so that callers (and the CLI exit
codes) can tell bad input, refused problem sizes, and numerical breakdown
apart.
"""

__all__ = ["PartdistError", "DomainError", "SizeLimitError", "NumericalError"]


class PartdistError(Exception):
    """Base class for all package-specific errors."""


class DomainError(PartdistError, ValueError):
    """Invalid input: malformed configuration, non-unitary matrix, bad shape."""


class SizeLimitError(PartdistError, ValueError):
    """Problem size beyond the guard rails (factorial/binomial blow-up)."""


class NumericalError(PartdistError, RuntimeError):
    """Numerical invariant violated (e.g. a rate significantly below zero)."""
