"""Quantization-based cubature over greedy sequences.

The full formula sums ``p_i f(a_i)`` over the current grid. Because a greedy
insertion only moves mass into the new cell from its two neighbours, the
integral can also be advanced step by step with two stored probabilities and
three evaluations of ``f``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .config import greedy_config
from .distributions import Distribution1D
from .errors import DomainError
from .greedy1d import GreedySequence, InsertionStep, build

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

INTEGRANDS: dict[str, Integrand] = {
    "one": np.ones_like,
    "x": lambda x: np.asarray(x, dtype=float),
    "x2": np.square,
    "abs": np.abs,
    "sin": np.sin,
    "expneg": lambda x: np.exp(-np.asarray(x, dtype=float)),
}


def get_integrand(name: str) -> Integrand:
    try:
        return INTEGRANDS[name]
    except KeyError:
        raise DomainError(f"unknown integrand '{name}', choose from {sorted(INTEGRANDS)}") from None


def _evaluate(f: Integrand, x) -> np.ndarray:
    return np.asarray(f(np.asarray(x, dtype=float)), dtype=float)


@dataclass(frozen=True)
class CubatureState:
    n: int
    value: float


def integrate_full(seq: GreedySequence, f: Integrand) -> float:
    """Sum of p_i f(a_i) over the sorted grid."""
    values = _evaluate(f, seq.sorted_points)
    return float(np.dot(np.asarray(seq.weights), values))


def start(seq: GreedySequence, f: Integrand) -> CubatureState:
    """State at level one: the single point carries all the mass."""
    return CubatureState(n=1, value=float(_evaluate(f, [seq.points[0]])[0]))


def advance(state: CubatureState, step: InsertionStep, seq: GreedySequence, f: Integrand) -> CubatureState:
    """Move I_{n-1} to I_n using the masses captured at insertion time.

    ``seq`` only supplies point coordinates and may be at level n or beyond.
    """
    if state.n != step.index:
        raise DomainError(f"state at level {state.n} cannot take step {step.index + 1}")
    pts = seq.points
    abscissae = [pts[step.index]]
    if step.left_idx is not None:
        abscissae.append(pts[step.left_idx])
    if step.right_idx is not None:
        abscissae.append(pts[step.right_idx])
    values = _evaluate(f, abscissae)
    fx, rest = values[0], list(values[1:])

    delta = 0.0
    if step.left_idx is not None:
        delta += step.p_minus * (rest.pop(0) - fx)
    if step.right_idx is not None:
        delta += step.p_plus * (rest.pop(0) - fx)
    return CubatureState(n=state.n + 1, value=state.value - float(delta))


def integrate_stream(dist: Distribution1D, f: Integrand, n: int, *, seq: GreedySequence | None = None) -> list[float]:
    """Recursive integrals I_1..I_n along the greedy sequence of ``dist``."""
    if n < 1:
        raise DomainError(f"stream length must be positive, got {n}")
    if seq is None or seq.n < n:
        seq = build(dist, n)
    state = start(seq, f)
    trace = [state.value]
    for step in seq.steps[:n - 1]:
        state = advance(state, step, seq, f)
        trace.append(state.value)
    return trace


def reference_integral(dist: Distribution1D, f: Integrand) -> float:
    """int f dP by adaptive quadrature against the density."""
    lo, hi = dist.support()
    cuts = [lo, *dist.breakpoints, hi]
    if math.isinf(lo) and math.isinf(hi) and not dist.breakpoints:
        cuts = [lo, dist.mean, hi]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        value, _ = integrate.quad(
            lambda t: float(_evaluate(f, t)) * dist.pdf(t),
            a,
            b,
            epsabs=greedy_config.quad_epsabs,
            epsrel=greedy_config.quad_epsrel,
            limit=200,
        )
        total += value
    return total
