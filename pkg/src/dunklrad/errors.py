"""Exception hierarchy."""


class DunklError(Exception):
    """Base class for all package errors."""


class DomainError(DunklError, ValueError):
    """Argument outside the domain of a function."""


class DivergenceError(DunklError, ArithmeticError):
    """An improper integral or a level set measure is infinite.

    ``side`` is one of ``"origin"``, ``"tail"``, ``"level_set"`` or ``None``.
    """

    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class DegenerateError(DunklError, ArithmeticError):
    """A normalising quantity vanishes (e.g. a zero denominator integral)."""


class InadmissibleParameters(DunklError, ValueError):
    """Parameter tuple violates the preconditions of an operation."""
