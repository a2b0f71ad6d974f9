"""Exception types shared across the package."""


class BoxatomError(Exception):
    """Base class for all package errors."""


class ValidationError(BoxatomError):
    """Invalid user input or violated precondition."""


class UnsupportedModeError(BoxatomError):
    """Requested feature outside the s-wave scope of the integral tables."""


class ConvergenceError(BoxatomError):
    """A numerical result failed its internal accuracy check."""
