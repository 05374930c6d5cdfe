"""Greedy quantization sequences, recursive quantization-based cubature and discrepancy diagnostics."""
from .distributions import Distribution1D, Interval, Kind, parse_distribution
from .errors import ComplexityError, DomainError, GreedyQuantError, InvariantError
from .greedy1d import GreedySequence, InsertionStep, build, init, insert_next

__all__ = [
    "ComplexityError",
    "Distribution1D",
    "DomainError",
    "GreedyQuantError",
    "GreedySequence",
    "InsertionStep",
    "Interval",
    "InvariantError",
    "Kind",
    "build",
    "init",
    "insert_next",
    "parse_distribution",
]
