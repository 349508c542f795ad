"""Exception types shared across the library."""


class ZGradedError(Exception):
    """Base class for all library-specific errors."""


class UnknownGenerator(ZGradedError):
    pass


class NonHomogeneousRule(ZGradedError):
    pass


class RingMismatch(ZGradedError):
    pass


class NotStronglyGraded(ZGradedError):
    pass


class NotFiniteType(ZGradedError):
    pass


class NotSquare(ZGradedError):
    pass


class ConstantTermSingular(ZGradedError):
    pass


class LeadingTermSingular(ZGradedError):
    pass


class NegativeDegreeEntry(ZGradedError):
    pass


class DegreeOutOfRange(ZGradedError):
    pass


class NotAComplex(ZGradedError):
    """Raised when two consecutive differentials do not compose to zero.

    ``level`` names the first n with d_{n-1} . d_n != 0 (the higher level).
    """

    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"d.d != 0 at level {level}")


class UnsupportedTarget(ZGradedError):
    pass


class DeltaSingular(ZGradedError):
    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"ds+sd singular at level {level}")


class ShapeMismatch(ZGradedError):
    pass


class ZeroMatrix(ZGradedError):
    pass


class NotSuitable(ZGradedError):
    pass


class UnsupportedRing(ZGradedError):
    pass


class CertificateFailure(ZGradedError):
    pass


class ParseError(ZGradedError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", col {col}" if col is not None else "")
        super().__init__(message + where)


class SchemaError(ZGradedError):
    pass
