"""Exception types shared across the package."""


class TristeinerError(Exception):
    """Base class for all package-specific errors."""


class DegenerateGeometry(TristeinerError):
    """Geometry too degenerate to work with (zero rays, collinear terminals...)."""


class NoConvergence(TristeinerError):
    """An iterative method hit its iteration cap before meeting tolerance."""


class RootFindingFailure(TristeinerError):
    """A root-finding or continuation step failed to converge or to bracket."""


class OutOfRange(TristeinerError):
    """An argument lies outside its documented valid interval."""
