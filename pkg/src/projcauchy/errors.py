"""Exception hierarchy shared by the geometry, sampling and oracle layers."""


class ProjCauchyError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(ProjCauchyError, ValueError):
    pass


class DomainError(ProjCauchyError, ValueError):
    """A point lies outside the domain of a projection (e.g. off the open hemisphere)."""


class DegenerateGeometryError(ProjCauchyError, ValueError):
    pass


class UnsupportedGeometryError(ProjCauchyError, ValueError):
    """Valid geometry that an operation deliberately does not handle (non-convex sampling)."""


class BudgetExceededError(ProjCauchyError, RuntimeError):
    """Adaptive quadrature ran out of evaluations. ``best`` holds the partial result."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InvalidBoundError(ProjCauchyError, ValueError):
    pass


class ImpracticalBoundError(ProjCauchyError, RuntimeError):
    pass


class InvalidBinningError(ProjCauchyError, ValueError):
    pass
