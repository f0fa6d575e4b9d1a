"""Exception types shared across the package."""


class ShadowError(Exception):
    """Base class for all package errors."""


class ValidationError(ShadowError, ValueError):
    """A body, frame or configuration failed construction-time checks."""


class RankError(ValidationError):
    """Spanning vectors or normals are linearly dependent."""


class DomainError(ShadowError, ValueError):
    """An operation was evaluated outside its domain (e.g. gradient at 0)."""


class ConvergenceError(ShadowError, RuntimeError):
    """A fiber solve did not converge where the caller required it to."""

    def __init__(self, message, result=None, theta=None):
        super().__init__(message)
        self.result = result
        self.theta = theta
