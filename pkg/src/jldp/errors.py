"""Exception hierarchy shared by every module."""


class JLDPError(Exception):
    """Base class for all library errors."""


class InvalidMatrixError(JLDPError, ValueError):
    pass


class SvdConvergenceError(JLDPError, ArithmeticError):
    pass


class DimensionMismatchError(JLDPError, ValueError):
    pass


class InvalidGraphError(JLDPError, ValueError):
    pass


class InvalidQueryError(JLDPError, ValueError):
    pass


class ParameterRangeError(JLDPError, ValueError):
    """A privacy/utility parameter is outside the range the mechanism supports."""


class GraphTooSmallError(ParameterRangeError):
    """w/n >= 1/2: the graph has too few nodes for the requested privacy level."""

    def __init__(self, message: str, min_n: int):
        super().__init__(message)
        self.min_n = min_n


class UnsupportedShapeError(JLDPError, ValueError):
    pass


class AllocationBudgetError(JLDPError, MemoryError):
    pass


class OutOfSupportError(JLDPError, ValueError):
    pass


class AuditPreconditionError(JLDPError, ValueError):
    pass


class IngestionError(JLDPError, ValueError):
    """Malformed input file."""
