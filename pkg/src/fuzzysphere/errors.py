"""Exception types shared across the package."""


class FuzzySphereError(Exception):
    """Base class for all package errors."""


class DimensionError(FuzzySphereError, ValueError):
    """Matrix shapes are empty, non-square or not conformable."""


class PreconditionError(FuzzySphereError, ValueError):
    """An input violates a stated precondition (Hermitian, on-sphere, equivariant...)."""


class DomainError(FuzzySphereError, ValueError):
    """An integer or real parameter lies outside the supported range."""


class SingularityError(FuzzySphereError, ArithmeticError):
    """A spectrum sits on a contour or at the spectral cut.

    ``eigenvalue`` holds the offending eigenvalue when one is known.
    """

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NoPathError(FuzzySphereError):
    """Two projections are too far apart for the affine spectral-cut path."""

    def __init__(self, message, delta=None):
        super().__init__(message)
        self.delta = delta


class ConfigError(FuzzySphereError, ValueError):
    """Invalid or incomplete run configuration."""
