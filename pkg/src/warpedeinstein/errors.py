"""Exception hierarchy."""


class GeometryError(Exception):
    """Base class for all errors raised by this package."""


class SingularMetricError(GeometryError):
    """Metric matrix is (numerically) singular at the evaluation point."""


class DomainError(GeometryError, ValueError):
    """Point lies outside the region where a field or profile is defined."""


class EvaluationError(GeometryError):
    """A value function produced a non-finite result.

    The offending point is kept on ``self.point``.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class BlowUpError(GeometryError):
    """Numerical integration produced a non-finite state."""

    def __init__(self, message, last_xi=None):
        super().__init__(message)
        self.last_xi = last_xi
