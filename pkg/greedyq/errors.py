"""Exception hierarchy shared by every greedyq module."""


class GreedyQuantError(Exception):
    """Base class for greedyq failures."""


class DomainError(GreedyQuantError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class ComplexityError(GreedyQuantError):
    """A computation was refused because its input is too large."""


class InvariantError(GreedyQuantError):
    """An internal consistency check failed."""
