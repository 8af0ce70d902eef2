"""Exception types shared across the package."""

__all__ = ["NumericFailure", "RootCountError"]


class NumericFailure(RuntimeError):
    """An iterative numeric procedure failed to converge.

    Carries the best residual seen so callers can report how close it got.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class RootCountError(ValueError):
    """A supplied root set is inconsistent with the polynomial it claims to factor."""
