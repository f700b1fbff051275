"""Exception hierarchy shared by every module of the package."""


class InflexionError(Exception):
    """Base class for all package errors."""


class InvalidCurveError(InflexionError, ValueError):
    """Sampled data violates the curve invariants (sorting, length, finiteness)."""


class InvalidIntervalError(InflexionError, ValueError):
    pass


class TooFewPointsError(InflexionError, ValueError):
    pass


class DegenerateChordError(InflexionError, ValueError):
    pass


class DegenerateCubicError(InflexionError, ValueError):
    pass


class UnsupportedFamilyError(InflexionError, ValueError):
    pass


class OrientationUndeterminedError(InflexionError):
    """Data too close to a straight line to tell convex-concave from concave-convex."""


class RootNotBracketedError(InflexionError):
    pass


class MalformedCSVError(InflexionError, ValueError):
    """CSV input could not be parsed; ``row`` is 1-based when known."""

    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row
