"""Exception hierarchy shared by all subpackages."""


class BinomialODEError(Exception):
    """Base class for every error raised by this package."""


# -- scalar tower -----------------------------------------------------------

class TowerError(BinomialODEError):
    pass


class NonMonic(TowerError):
    pass


class NonIsolating(TowerError):
    pass


class IncompatibleTower(TowerError):
    pass


class NotInvertible(BinomialODEError, ArithmeticError):
    """Nonzero element without an inverse (e.g. ``1 + u`` for a unit symbol ``u``)."""


class ZeroDivisor(NotInvertible):
    """Nonzero tower element that divides zero; the tower must be split on a factor."""


class DivisionByZero(BinomialODEError, ZeroDivisionError):
    pass


class UnboundUnit(BinomialODEError):
    pass


# -- exponential polynomials ------------------------------------------------

class ZeroFunction(BinomialODEError):
    pass


# -- equations --------------------------------------------------------------

class ConstantExponent(BinomialODEError):
    pass


class DegenerateCoefficients(BinomialODEError):
    pass


class VanishingAux(BinomialODEError):
    pass


class ShapeMismatch(BinomialODEError):
    pass


# -- classifier -------------------------------------------------------------

class HypothesisUnmet(BinomialODEError):
    pass


class CapabilityExceeded(BinomialODEError):
    pass


class EmptyAnsatz(BinomialODEError):
    """No candidate degree balances the polynomial constraint."""


class RelationViolated(BinomialODEError):
    pass


class MissingBinding(BinomialODEError):
    pass


class MultipleDegeneracies(BinomialODEError):
    pass


# -- numerics ---------------------------------------------------------------

class NumericError(BinomialODEError):
    pass


class PoleOnCircle(NumericError):
    pass


class ContourThroughZero(NumericError):
    pass


class NonConvergent(NumericError):
    pass


# -- frontend ---------------------------------------------------------------

class ParseError(BinomialODEError):
    """Syntax error with a source span ``(start, end)``."""

    def __init__(self, message, span=None, text=None):
        self.message = message
        self.span = span
        self.text = text
        if span is not None:
            message = f"{message} at {span[0]}:{span[1]}"
        super().__init__(message)


class NonPolynomialExponent(ParseError):
    pass


class UnrecognizedShape(ParseError):
    pass
