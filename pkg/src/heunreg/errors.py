"""Exception hierarchy.

Domain errors (bad parameters, points on a cut, poles in gamma) and
convergence errors (series or quadrature that would not settle) are kept
apart so the command line can map them to distinct exit codes.
"""


class HeunError(Exception):
    """Base class for every error raised by this package."""

    category = "HeunError"

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message


class DomainError(HeunError, ValueError):
    category = "DomainError"


class ConvergenceError(HeunError, ArithmeticError):
    category = "ConvergenceError"


class InvalidSingularPoint(DomainError):
    category = "InvalidSingularPoint"


class OnCut(DomainError):
    category = "OnCut"


class TargetOnCut(OnCut):
    category = "TargetOnCut"


class OutsideSheet(DomainError):
    category = "OutsideSheet"


class TargetOutsideSheet(OutsideSheet):
    category = "TargetOutsideSheet"


class OutOfDisk(DomainError):
    category = "OutOfDisk"


class SingularCenter(DomainError):
    category = "SingularCenter"


class SegmentNearSingularity(DomainError):
    category = "SegmentNearSingularity"


class PoleAtGamma(DomainError):
    """gamma sits on a pole of the requested (unregularized) function."""

    category = "PoleAtGamma"

    def __init__(self, integer, message=""):
        super().__init__(message or f"gamma is at the pole gamma = {integer}")
        self.integer = integer


class NonConvergence(ConvergenceError):
    category = "NonConvergence"


class QuadratureUnresolved(ConvergenceError):
    category = "QuadratureUnresolved"


class ToleranceUnreachable(ConvergenceError):
    category = "ToleranceUnreachable"
