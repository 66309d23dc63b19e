"""Exception hierarchy.

Input problems derive from ``DataError``; numerical breakdowns derive from
``NumericalError``. The CLI maps these to exit codes 2 and 3.
"""

from __future__ import annotations


class NevPickError(Exception):
    pass


class DataError(NevPickError, ValueError):
    """Malformed or inconsistent problem data."""


class ParseError(DataError):
    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class NumericalError(NevPickError, ArithmeticError):
    """A computation could not be carried out reliably."""


class SpectralOverlapError(NumericalError):
    pass


class SingularMatrixError(NumericalError):
    pass


class PoleProximityError(NumericalError):
    pass


class SingularDenominatorError(NumericalError):
    def __init__(self, message: str, smallest_singular_value: float):
        self.smallest_singular_value = smallest_singular_value
        super().__init__(message)


class ContourError(NumericalError):
    pass


class WindingError(NumericalError):
    pass
