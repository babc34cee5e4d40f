"""Exception hierarchy shared by every module of the package."""


class AnnealPDEError(Exception):
    """Base class for all errors raised by annealpde."""


class InvalidParameter(AnnealPDEError, ValueError):
    pass


class LengthMismatch(AnnealPDEError, ValueError):
    pass


class DimensionMismatch(AnnealPDEError, ValueError):
    pass


class NonFiniteValue(AnnealPDEError, ValueError):
    pass


class NotSymmetric(AnnealPDEError, ValueError):
    pass


class ZeroVector(AnnealPDEError, ValueError):
    pass


class ZeroRhs(AnnealPDEError, ValueError):
    pass


class EmptyProblem(AnnealPDEError, ValueError):
    pass


class TooLarge(AnnealPDEError, ValueError):
    pass


class NotPositiveDefinite(AnnealPDEError, ArithmeticError):
    pass


class DegenerateDenominator(AnnealPDEError, ArithmeticError):
    pass


class DegenerateEigenvector(AnnealPDEError, ArithmeticError):
    pass


class NonNegativeLambda(AnnealPDEError, ArithmeticError):
    pass


class IterationLimit(AnnealPDEError, RuntimeError):
    pass


class AllZeroSample(AnnealPDEError, RuntimeError):
    """The sampler kept returning the all-zero bit vector."""


class OutputUnwritable(AnnealPDEError, OSError):
    pass
