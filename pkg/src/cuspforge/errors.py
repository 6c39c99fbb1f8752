"""Exception hierarchy shared by every layer of the package."""


class CuspForgeError(Exception):
    """Base class for all errors raised by cuspforge."""


# series arithmetic
class ZeroBudget(CuspForgeError):
    """A derivative was requested from a jet with no certified degree left."""


class NonUnitDivisor(CuspForgeError):
    pass


class NotDivisible(CuspForgeError):
    """Exact division by ``v`` failed: the v**0 slice is not zero."""


class NonPositiveConstantTerm(CuspForgeError):
    pass


class SingularAtOrigin(CuspForgeError):
    pass


class NonVanishingConstant(CuspForgeError):
    pass


# curves
class DegenerateCurve(CuspForgeError):
    pass


class NonOrthonormalFrame(CuspForgeError):
    pass


class NotOrthonormal(CuspForgeError):
    pass


class MuOutOfRange(CuspForgeError):
    pass


# map germs
class DegenerateFrame(CuspForgeError):
    pass


class DegenerateEdge(CuspForgeError):
    """The germ is not a cuspidal edge along the u-axis."""


class NotAdapted(CuspForgeError):
    pass


class WrongOrientation(CuspForgeError):
    pass


class InvalidMetric(CuspForgeError):
    pass


class GenericityViolated(CuspForgeError):
    pass


class NonGeneric(GenericityViolated):
    """The limiting normal curvature vanishes at the origin."""


class CurvatureTooSmall(GenericityViolated):
    """The target curve's curvature does not strictly dominate |kappa_s|."""


# solver
class MatrixSingular(CuspForgeError):
    pass


class BudgetExhausted(CuspForgeError):
    pass
