"""Exception hierarchy shared by all modules."""


class DeltaHomogError(ValueError):
    """Base class for every error raised by this package."""


class UnsupportedRank(DeltaHomogError):
    pass


class NotARoot(DeltaHomogError):
    pass


class CollinearRoots(DeltaHomogError):
    pass


class SignConsistencyFailure(DeltaHomogError):
    """No sign assignment for the structure constants satisfies Jacobi."""


class DimensionMismatch(DeltaHomogError):
    pass


class BadDimension(DeltaHomogError):
    pass


class NotInP(DeltaHomogError):
    """A vector expected in the isotropy complement has an h-component."""


class SingularGram(DeltaHomogError):
    pass


class NearEqualParams(DeltaHomogError):
    """x1 and x2 are too close for a formula containing 1/(x2 - x1)."""


class HypothesisViolation(DeltaHomogError):
    pass


class OutOfRange(DeltaHomogError):
    pass


class ZeroVector(DeltaHomogError):
    pass


class InvalidSplit(DeltaHomogError):
    """A reductive decomposition fails orthogonality or invariance."""
