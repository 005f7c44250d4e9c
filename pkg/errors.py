#!/usr/bin/env python3
"""
Exception types shared by the hecke-sums modules.

Library code raises these; hecke_sums.py maps them onto exit codes.
"""

from typing import Optional


class HeckeSumsError(Exception):
    """Base class for every error raised on purpose by this package."""


class InvalidArgumentError(HeckeSumsError, ValueError):
    pass


class PreconditionError(InvalidArgumentError):
    """The hypothesis of an identity fails for the given arguments."""


class OutOfRangeError(HeckeSumsError, IndexError):
    pass


class ResourceLimitError(HeckeSumsError):
    pass


class NoSolutionError(HeckeSumsError, ValueError):
    pass


class DegeneratePhaseError(HeckeSumsError, ArithmeticError):
    pass


class ConsistencyError(HeckeSumsError, RuntimeError):
    """Internal bug trap: a partition or bookkeeping invariant broke."""


class CacheFormatError(HeckeSumsError):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line


class BudgetExceededError(HeckeSumsError):
    """Quadrature could not reach the tolerance; carries the best estimate."""

    def __init__(self, message: str, estimate: complex, error: float):
        super().__init__(f"{message} (estimate={estimate}, error={error:.3e})")
        self.estimate = estimate
        self.error = error


class FloorAmbiguityError(HeckeSumsError, ArithmeticError):
    def __init__(self, n: int, c: float):
        super().__init__(f"floor of {n}^{c!r} is ambiguous even at high precision")
        self.n = n
        self.c = c
