"""Exception types raised across the package."""


class PatternError(ValueError):
    """Base class for all errors raised by patternfft."""


class SingularMatrix(PatternError):
    pass


class NotInLattice(PatternError):
    pass


class NotInPattern(PatternError):
    pass


class BadFactorization(PatternError):
    pass


class NotASubpattern(PatternError):
    pass


class Unsupported(PatternError):
    pass


class TooLarge(PatternError):
    pass


class ShapeMismatch(PatternError):
    pass


class NonInvertibleKernel(PatternError):
    pass


class DegenerateDirections(PatternError):
    pass
