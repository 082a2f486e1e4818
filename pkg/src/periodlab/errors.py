"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented codes: 2 for violated preconditions, 3 for numeric failures.
"""


class PeriodLabError(Exception):
    exit_code = 3


class PreconditionError(PeriodLabError):
    exit_code = 2


class NumericFailure(PeriodLabError):
    exit_code = 3


# numerics
class PoleAtNonpositiveInteger(PreconditionError):
    pass


class ZeroBase(PreconditionError):
    pass


# exact algebra
class IterationDivergence(NumericFailure):
    pass


class ParseError(PreconditionError):
    pass


# hypergeometric
class OutOfDisk(PreconditionError):
    pass


class CPole(PreconditionError):
    pass


class DivergentAtOne(PreconditionError):
    pass


class IntegerExponent(PreconditionError):
    pass


class DegenerateParameters(PreconditionError):
    pass


# ODE engine
class NoRelationWithinCap(NumericFailure):
    pass


class SingularGauge(PreconditionError):
    pass


class PathTooCloseToSingularity(PreconditionError):
    pass


class StepUnderflow(NumericFailure):
    pass


class IrregularSingularity(PreconditionError):
    pass


class Inconclusive(NumericFailure):
    pass


# catalog
class UnknownFamily(PreconditionError):
    pass


class RecipeUnavailable(PreconditionError):
    pass


# elliptic
class SingularFiber(PreconditionError):
    pass


class SingularCurve(PreconditionError):
    pass


class QuadratureNonconvergence(NumericFailure):
    pass


# curves
class DegenerateBranchData(PreconditionError):
    pass


class ExceptionalPoint(PreconditionError):
    pass


class BranchAmbiguity(PreconditionError):
    pass


# algebraicity
class PrecisionTooLow(PreconditionError):
    pass
