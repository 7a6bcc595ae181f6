"""Exception types shared across the package.

The command line front end maps these onto exit codes: anything that is a
user/input problem derives from ``UsageError`` (exit 1), while
``InternalCheckError`` flags a violated internal invariant (exit 2).
"""


class TwistmodError(Exception):
    """Base class for all package errors."""


class UsageError(TwistmodError):
    """Invalid input or arguments supplied by the caller."""


class ShapeError(UsageError):
    pass


class FieldError(UsageError):
    pass


class ParseError(UsageError):
    pass


class SingularMatrixError(UsageError):
    pass


class IsotropyError(UsageError):
    """A subspace fails an isotropy precondition."""


class StabilityError(UsageError):
    """A module fails a semistability precondition."""


class BoundExceededError(UsageError):
    """An enumeration would exceed the configured bound."""


class InternalCheckError(TwistmodError):
    """A result failed one of the package's own consistency checks."""
