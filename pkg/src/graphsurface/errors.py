"""Exception types shared across the package."""


class GraphSurfaceError(Exception):
    pass


class DomainError(GraphSurfaceError, ValueError):
    """An argument lies outside the domain of the operation."""


class FeasibilityExceeded(GraphSurfaceError):
    """The requested exact enumeration is too large to run."""


class VerificationFailed(GraphSurfaceError):
    """An internal cross-check disagreed (e.g. an interpolation degree bound)."""
