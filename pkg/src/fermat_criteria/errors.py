"""Exception hierarchy shared by every module of the toolkit."""


class FermatCriteriaError(Exception):
    """Base class for all errors raised by this package."""


class NotSquareFree(FermatCriteriaError, ValueError):
    pass


class OutOfRange(FermatCriteriaError, ValueError):
    pass


class DivisionByZero(FermatCriteriaError, ZeroDivisionError):
    pass


class NotPrime(FermatCriteriaError, ValueError):
    pass


class ZeroArgument(FermatCriteriaError, ValueError):
    pass


class ZeroCoefficient(FermatCriteriaError, ValueError):
    pass


class GeneratorNotFound(FermatCriteriaError, RuntimeError):
    """A bounded generator search gave up; raise the height bound and retry."""


class NotASolution(FermatCriteriaError, ValueError):
    pass


class TrivialSolution(FermatCriteriaError, ValueError):
    pass


class DegenerateLambda(FermatCriteriaError, ValueError):
    pass


class NonPrincipalGcd(FermatCriteriaError, ValueError):
    pass


class InvalidProfile(FermatCriteriaError, ValueError):
    pass


class OutOfScope(FermatCriteriaError, ValueError):
    pass


class HypothesisViolated(FermatCriteriaError, ValueError):
    pass


class LimitTooLarge(FermatCriteriaError, ValueError):
    pass


class ParseError(FermatCriteriaError, ValueError):
    pass
