"""Exception hierarchy shared by all modules."""


class ValuniformError(Exception):
    """Base class for every error raised by the engine."""


# ordered groups / integer linear algebra
class RankMismatch(ValuniformError, ValueError):
    pass


class NegativeInput(ValuniformError, ValueError):
    pass


class AlgorithmStall(ValuniformError, RuntimeError):
    pass


class NonUnimodular(ValuniformError, ValueError):
    pass


class OrderNotTotal(ValuniformError, ValueError):
    pass


# function fields and parsing
class ParseError(ValuniformError, SyntaxError):
    pass


class UnknownVariable(ValuniformError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class WrongCharacteristic(ValuniformError, ZeroDivisionError):
    pass


class DivisionByZero(ValuniformError, ZeroDivisionError):
    pass


# valuation
class NonzeroValue(ValuniformError, ValueError):
    pass


class NegativeValue(ValuniformError, ValueError):
    pass


class ZeroElement(ValuniformError, ValueError):
    pass


class ContextInvalid(ValuniformError, ValueError):
    pass


class HSetInconsistent(ValuniformError, AssertionError):
    """A non-negativity invariant of the H-set failed; indicates an upstream bug."""


# transforms
class EmptyCenter(ValuniformError, ValueError):
    pass


class DimensionZero(ValuniformError, ValueError):
    pass


class IterationCapExceeded(ValuniformError, RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RationalDependenceUnresolved(ValuniformError, RuntimeError):
    pass


class NotInBaseRing(ValuniformError, ValueError):
    pass


# inertial ascent
class InvalidPresentation(ValuniformError, ValueError):
    pass


class NonUnitDenominator(ValuniformError, ValueError):
    pass


class MissingConstant(ValuniformError, LookupError):
    pass


class InertialCheckFailed(ValuniformError, ValueError):
    pass
