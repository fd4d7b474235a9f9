"""Exception and warning classes shared across the package."""


class GaborFiberError(Exception):
    """Base class for all errors raised by :mod:`gaborfiber`."""


class PreconditionError(GaborFiberError):
    """An input violates an operation's precondition (CLI exit code 2)."""


class CompatibilityError(PreconditionError):
    """Fiber fields or module vectors live on different grids."""


class RealExpectedError(PreconditionError):
    """A field expected to be real carries a non-negligible imaginary part."""


class AlignmentError(PreconditionError):
    """A period, shift or step is not commensurate with the sample grid."""


class TruncationError(PreconditionError):
    """A window's support does not fit the requested truncation."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class NotAFrameError(PreconditionError):
    """The lower frame bound is not separated from zero."""


class NumericalError(GaborFiberError):
    """A numerical kernel failed (CLI exit code 3)."""

    def __init__(self, message, fiber=None):
        super().__init__(message)
        self.fiber = fiber


class ConditioningWarning(UserWarning):
    """A fiber matrix is too ill-conditioned for a trustworthy solve."""


class SnapWarning(UserWarning):
    """A parameter was snapped to the nearest representable grid value."""


class TruncationWarning(UserWarning):
    """A truncation parameter is smaller than the support requires."""
