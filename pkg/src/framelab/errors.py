"""Exception hierarchy.

Every error raised on purpose by framelab derives from FramelabError, so the
CLI can map them to exit code 2 in one place.
"""


class FramelabError(Exception):
    pass


class NotSymmetric(FramelabError, ValueError):
    pass


class NotAFrame(FramelabError, ValueError):
    pass


class NotParseval(FramelabError, ValueError):
    pass


class NotRieszBasis(FramelabError, ValueError):
    pass


class NotABasis(FramelabError, ValueError):
    pass


class DimensionMismatch(FramelabError, ValueError):
    pass


class TooFewVectors(FramelabError, ValueError):
    pass


class ComplexNotSupported(FramelabError, ValueError):
    pass


class NormsDiffer(FramelabError, ValueError):
    pass


class UnrealizableNorms(FramelabError, ValueError):
    pass


class SingularOperator(FramelabError, ValueError):
    pass


class VectorsOutsideSubspace(FramelabError, ValueError):
    pass


class PremiseFailed(FramelabError, ValueError):
    """A constructor's hypothesis does not hold; ``partition`` names the obstruction when known."""

    def __init__(self, message, partition=None):
        super().__init__(message)
        self.partition = partition


class PreconditionRange(FramelabError, ValueError):
    pass


class CandidateBudgetExhausted(FramelabError, RuntimeError):
    pass


class ConstructionBudgetExhausted(FramelabError, RuntimeError):
    pass


class ScanTooLarge(FramelabError, ValueError):
    pass


class SelfCheckFailed(FramelabError, AssertionError):
    """Two independent routes that must agree disagreed."""


class ParseError(FramelabError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column


class ZeroVector(ParseError):
    pass
