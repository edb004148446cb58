"""Exception types shared across the package."""


class LiftCocycleError(Exception):
    pass


class PrecisionInsufficient(LiftCocycleError):
    """A truncated symbol is not known deep enough for the requested result."""


class MissingQEntry(LiftCocycleError):
    pass


class NotInvertible(LiftCocycleError, ZeroDivisionError):
    """A denominator vanishes in the active prime field."""


class NonMonomialInput(LiftCocycleError, ValueError):
    pass


class NotACycle(LiftCocycleError):
    pass


class UnknownFormula(LiftCocycleError, KeyError):
    pass


class UnknownSuite(LiftCocycleError, KeyError):
    pass


class InconsistentK(LiftCocycleError):
    pass


class ParseError(LiftCocycleError, ValueError):
    pass
