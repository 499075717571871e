"""Exception types raised by qgbound."""


class QGBoundError(Exception):
    """Base class for all library errors."""


class NonHermitianInput(QGBoundError, ValueError):
    pass


class DimMismatch(QGBoundError, ValueError):
    pass


class GapClosing(QGBoundError, ArithmeticError):
    """Occupied and unoccupied levels are (nearly) degenerate."""


class Degenerate(QGBoundError, ArithmeticError):
    """A matrix that must be inverted has (numerically) vanishing determinant."""


class InvalidSpin(QGBoundError, ValueError):
    pass


class WrongDimension(QGBoundError, ValueError):
    pass


class WrongArity(QGBoundError, ValueError):
    pass


class InvalidDensity(QGBoundError, ValueError):
    pass


class InvalidCount(QGBoundError, ValueError):
    pass


class ConfigError(QGBoundError, ValueError):
    """Bad scenario configuration; ``key`` names the offending entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
