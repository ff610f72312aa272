"""Exception hierarchy.

Two broad families matter to callers (and to the CLI exit-code mapping):
data problems in the caller's input versus numerical failures inside the
estimation machinery.
"""


class SarimaKitError(Exception):
    """Base class for all errors raised by this package."""


class DataError(SarimaKitError, ValueError):
    """Invalid or unusable input data (exit code 2 in the CLI)."""


class InsufficientDataError(DataError):
    """Series too short for the requested operation."""


class TransformDomainError(DataError):
    """Value outside the domain of a transform (e.g. Box-Cox on y <= 0)."""


class ConstantSeriesError(DataError):
    """Operation undefined on a constant series (zero variance)."""


class NumericalError(SarimaKitError, RuntimeError):
    """Numerical failure during estimation (exit code 3 in the CLI)."""


class SingularityError(NumericalError):
    """A recursion or linear solve hit a (near-)singular denominator."""


class InvertibilityError(NumericalError):
    """Polynomial roots on or inside the unit circle where outside is required."""


class AllFitsFailedError(NumericalError):
    """Every candidate in a model grid failed to fit."""
