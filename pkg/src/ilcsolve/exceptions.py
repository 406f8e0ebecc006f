"""Exception types raised across the package."""


class IlcsolveError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(IlcsolveError, ValueError):
    """Operands have incompatible shapes."""


class NonSquareError(DimensionMismatchError):
    """A square matrix was required."""


class SingularMatrixError(IlcsolveError, ValueError):
    """Matrix is numerically singular at the active rank tolerance."""


class SingularGramError(SingularMatrixError):
    """A Gram-type product required by a gain formula is singular.

    Cannot occur when the decomposition is consistent with the system
    matrix; signals a stale or mismatched decomposition.
    """


class ZeroMatrixError(IlcsolveError, ValueError):
    """System matrix has rank zero: no nonzero reference is reachable."""


class NotNilpotentError(IlcsolveError, ValueError):
    """Supplied seed matrix failed the nilpotency check."""


class GainInvalidError(IlcsolveError, ValueError):
    """Gain does not satisfy the convergence certificate required here."""


class NotConvergedError(IlcsolveError, RuntimeError):
    """Iteration budget exhausted before the stopping tolerance was met.

    Carries the partial trace and the problem classification so callers
    can inspect or report what was achieved.
    """

    def __init__(self, message, trace=None, classification=None):
        super().__init__(message)
        self.trace = trace
        self.classification = classification


class NoUniformRelativeDegreeError(IlcsolveError, ValueError):
    """Output channels do not share a single input-output delay."""


class WrongSampleCountError(DimensionMismatchError):
    """Reference sample sequence does not match the system horizon."""


class ParseError(IlcsolveError, ValueError):
    """Problem or result document is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
