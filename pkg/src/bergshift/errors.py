"""Exception hierarchy shared by all modules."""


class BergshiftError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(BergshiftError, ValueError):
    """An argument is outside the domain accepted by the operation."""


class InvalidCoefficientError(InvalidParameterError):
    """A recursion coefficient violates its constraint.

    The offending index is kept in ``index`` so callers (and the CLI) can
    report it.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BoundsError(BergshiftError, IndexError):
    """An index or window falls outside a finite truncation."""


class NumericError(BergshiftError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class ContaminationError(NumericError):
    """A full-matrix quantity would depend on entries beyond the truncation."""


class PoleError(NumericError):
    """A ratio was requested at (numerically) a zero of the denominator."""


class EigensolverError(NumericError):
    """The eigenvalue iteration did not converge."""


class DegenerateMeasureError(NumericError):
    """Gram-Schmidt broke down: the measure has too few support points."""


class ModelError(NumericError):
    """A truncation does not have the structure the operation relies on."""


class InsufficientDataError(InvalidParameterError):
    """Too few subsequence indices to form an estimate."""
