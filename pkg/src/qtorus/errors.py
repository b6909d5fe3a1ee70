"""Exception hierarchy shared across qtorus."""


class QTorusError(Exception):
    """Base class for all library errors."""


class ParseError(QTorusError, ValueError):
    pass


class ZeroDenominator(QTorusError, ZeroDivisionError):
    pass


class DivisionByZero(QTorusError, ZeroDivisionError):
    pass


class RationalValue(QTorusError, ValueError):
    """A value expected to be a quadratic irrational reduced to a rational."""


class RationalInput(RationalValue):
    """A parameter that must be irrational (theta, theta1, theta2) was rational."""


class MixedDiscriminant(QTorusError, ValueError):
    pass


class NotUnimodular(QTorusError, ValueError):
    pass


class InternalDegeneracy(QTorusError, AssertionError):
    """A linear system that is provably nondegenerate turned out degenerate."""


class TorusMismatch(QTorusError, ValueError):
    pass


class UndefinedPairing(QTorusError, ValueError):
    pass


class NotGammaCoefficient(QTorusError, ValueError):
    pass


class NotSingleTerm(QTorusError, ValueError):
    pass


class SameBundle(QTorusError, ValueError):
    pass


class InconsistentWitness(QTorusError, ValueError):
    pass


class InvalidWitness(QTorusError, ValueError):
    pass


class UnmappedRepresentative(QTorusError, KeyError):
    pass
