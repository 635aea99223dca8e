"""
Errors Module
Exception hierarchy shared by the core, the services and the CLI.

Every error carries the process exit code the CLI should terminate with.
"""


class CantorLabError(Exception):
    """Base class for all cantorlab failures"""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ConfigError(CantorLabError):
    """Malformed or inconsistent run configuration"""

    exit_code = 2


class PreconditionError(CantorLabError):
    """A mathematical operation was called outside its domain"""

    exit_code = 3


class InvalidSubstitutionError(PreconditionError):
    pass


class InvalidPathError(PreconditionError):
    pass


class MismatchedDiagramError(PreconditionError):
    pass


class NotPrimitiveError(PreconditionError):
    pass


class ConvergenceError(PreconditionError):
    pass


class DegenerateDiagramError(PreconditionError):
    """Perron eigenvalue <= 1: the path space is not a Cantor set"""


class EnumerationCapError(PreconditionError):
    pass


class UndecidableDistanceError(PreconditionError):
    pass


class InsufficientDepthError(PreconditionError):
    pass


class PlanError(PreconditionError):
    pass


class MissingLabelError(PreconditionError):
    pass


class InvalidLabelingError(PreconditionError):
    pass


class ZeroDistancePairError(PreconditionError):
    pass


class UnboundedRegimeError(PreconditionError):
    pass


class ThresholdError(PreconditionError):
    """Dimension or exponent below the certified threshold"""


class TechConditionError(PreconditionError):
    pass


class InvariantViolationError(CantorLabError):
    exit_code = 4
