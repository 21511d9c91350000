"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(DomainError):
    """A structural precondition (e.g. a required Schmidt rank) is not met."""


class StateFileError(DomainError):
    """A state file could not be parsed."""


class NumericalInconsistency(ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""
