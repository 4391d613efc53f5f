"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A configuration or input value failed validation."""


class QuadratureError(RuntimeError):
    """A quadrature did not reach the requested accuracy.

    Carries the partial estimate and its estimated error so callers can
    decide whether to accept a degraded result.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NotBoundaryPointError(ValueError):
    """The evaluation point is not on (or near) the boundary of the set."""


class DivergentTailError(ValueError):
    """The integrand grows too fast at infinity for the integral to exist."""


class NoVerticalWindowError(ValueError):
    """No boundary jump detected, so there is no vertical window to invert."""


class DegenerateWindowError(ValueError):
    """The fit window carries no usable variation (e.g. constant solution)."""


class MismatchedReportsError(ValueError):
    """Reports passed together do not share datum, order, or grid lineage."""
