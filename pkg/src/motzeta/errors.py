"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes, so every error raised on bad input
derives from :class:`MotivicError`.
"""


class MotivicError(Exception):
    """Base class for all errors raised by :mod:`motzeta`."""


class InputError(MotivicError, ValueError):
    """Malformed or inconsistent input data."""


class SymbolConflict(InputError):
    """Two stratum symbols share an identity but disagree on their data."""


class DualityUndefined(MotivicError):
    """Duality was applied to a symbol that is not smooth and proper."""

    def __init__(self, symbol):
        super().__init__(f"duality undefined on {symbol}")
        self.symbol = symbol


class UnknownSymbol(MotivicError, KeyError):
    def __init__(self, symbol):
        super().__init__(f"symbol {symbol} is not part of the basis")
        self.symbol = symbol

    def __str__(self):
        return self.args[0]


class MissingCount(MotivicError, KeyError):
    def __init__(self, symbol):
        super().__init__(f"no point count for {symbol}")
        self.symbol = symbol

    def __str__(self):
        return self.args[0]


class NonIntegralSpecialization(MotivicError, ArithmeticError):
    pass


class NotRegularAtInfinity(MotivicError, ArithmeticError):
    pass


class NotExpandable(MotivicError, ArithmeticError):
    pass


class MissingTag(MotivicError):
    pass


class NotASimplex(MotivicError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "not a simplex"


class NotARefinement(MotivicError):
    pass


class NotCoprime(InputError):
    pass


class EmptySubset(InputError):
    pass


class RankTooLarge(MotivicError):
    pass


class BudgetExceeded(MotivicError):
    pass


class PreconditionError(InputError):
    pass
