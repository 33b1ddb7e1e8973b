"""Exception hierarchy shared by all modules."""


class FracVarError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracVarError, ValueError):
    """An evaluation point lies outside the interval or box it must belong to."""


class QuadratureError(FracVarError, RuntimeError):
    """A quadrature rule could not be constructed."""


class DimensionError(FracVarError, ValueError):
    """An operator was applied to a box or field of the wrong dimension."""


class AdmissibilityError(FracVarError, ValueError):
    """A trial function violates the prescribed boundary data."""


class LagrangianError(FracVarError, ValueError):
    """Supplied partial derivatives of a Lagrangian disagree with the Lagrangian."""


class UsageError(FracVarError, ValueError):
    """An operation was called on a problem of the wrong kind."""


class UnsupportedSurfaceError(FracVarError, ValueError):
    """Stokes checks only accept flat patches orthogonal to a coordinate axis."""
