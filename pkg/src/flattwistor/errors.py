"""Exception types raised across the package."""


class TwistorError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(TwistorError, ValueError):
    pass


class RealPointError(TwistorError):
    """A point of CP^{n+1} lies (numerically) on RP^{n+1}."""


class SingularMatrixError(TwistorError):
    pass


class FiberMismatchError(TwistorError):
    """The point does not project to the given oriented plane."""


class DegenerateQuadric(TwistorError):
    pass


class AmbientTooSmall(TwistorError):
    pass


class HasRealPoints(TwistorError):
    pass


class RankDeficientBasis(TwistorError):
    pass


class StepTooLarge(TwistorError):
    pass


class ZeroCovector(TwistorError):
    pass


class VectorInPlane(TwistorError):
    pass


class FiberMultiplicityError(TwistorError):
    """Zero or two fiber roots landed in the upper half-plane."""


class RankDeficientTangent(TwistorError):
    pass


class IllConditionedExpansion(TwistorError):
    pass
