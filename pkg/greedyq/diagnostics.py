"""Numerical checks on greedy sequences.

Covers the n^{-1} error rate and its explicit Pierce-type bound, distortion
mismatch in L^s, the limit of the cell weights, sub-optimal levels checked
against a batch Lloyd oracle, the stationarity gap, rho-quasi-stationarity
and the discrepancy of greedy product grids next to Halton points.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate, optimize

from .config import greedy_config
from .discrepancy import PointSet, star_disc_2d
from .distributions import Distribution1D, Kind
from .errors import DomainError
from .greedy1d import GreedySequence, build, error_lr_trace, gap_inertia, power_deviation, truncate
from .pricing import halton_points
from .product_grid import grow_to, product_grid, product_points

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------- rates


@dataclass(frozen=True, eq=False)
class RateProfile:
    r: float
    levels: np.ndarray
    errors: np.ndarray
    scaled: np.ndarray
    bound: np.ndarray | None = None

    def spread(self, lo: int | None = None, hi: int | None = None) -> float:
        """max / min of n * e_r over levels in [lo, hi]."""
        mask = np.ones(self.levels.size, dtype=bool)
        if lo is not None:
            mask &= self.levels >= lo
        if hi is not None:
            mask &= self.levels <= hi
        window = self.scaled[mask]
        return float(window.max() / window.min())

    def rows(self) -> list[tuple[int, float, float]]:
        return [(int(n), float(e), float(s)) for n, e, s in zip(self.levels, self.errors, self.scaled)]


def pierce_constant(r: float = 2.0, delta: float = 1.0, d: int = 1) -> float:
    """Explicit greedy Pierce-type constant in dimension one, minimised over eps on a 1e-3 grid."""
    if d != 1:
        raise DomainError(f"the explicit constant is only evaluated for d=1, got {d}")
    unit_ball = 2.0
    eps = np.arange(1, 334) * 1e-3
    eps = eps[eps < 1.0 / 3.0]
    phi = (3.0**-r - eps**r) * eps**d
    best = float(np.min((1.0 + eps) * phi ** (-1.0 / d)))
    shape = ((delta / r) ** (r / (r + delta)) + (r / delta) ** (delta / (r + delta))) ** (1.0 + delta / r)
    tail_integral = 2.0 + 2.0 * r / delta
    return unit_ball ** (-1.0 / d) * (r / d) ** (1.0 / d) * shape * tail_integral ** (1.0 / d) * best


def sigma_r(dist: Distribution1D, r: float) -> float:
    """L^r standard deviation: min over a of ||X - a||_r."""
    if r == 2:
        return math.sqrt(dist.variance)

    def moment(a: float) -> float:
        lo, hi = dist.support()
        return power_deviation(dist, lo, a, a, r) + power_deviation(dist, a, hi, a, r)

    lo, hi = dist.effective_support()
    result = optimize.minimize_scalar(moment, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    return float(result.fun) ** (1.0 / r)


def _profile(seq: GreedySequence, r: float, method: str, with_bound: bool) -> RateProfile:
    errors = error_lr_trace(seq, r, method=method)[1:]
    levels = np.arange(2, seq.n + 1)
    bound = None
    if with_bound:
        delta = 1.0
        bound = pierce_constant(r, delta) * sigma_r(seq.dist, r + delta) / (levels - 1.0)
    return RateProfile(r=r, levels=levels, errors=errors, scaled=levels * errors, bound=bound)


def rate_profile(dist: Distribution1D, r: float, N: int, *, seq: GreedySequence | None = None, with_bound: bool = True) -> RateProfile:
    """n * e_r for n = 2..N along the greedy sequence, with the Pierce-type bound."""
    if N < 2:
        raise DomainError(f"a rate profile needs N >= 2, got {N}")
    seq = build(dist, N) if seq is None else truncate(seq, N)
    return _profile(seq, r, "auto", with_bound)


def mismatch_profile(dist: Distribution1D, s: float, N: int, *, r: float = 2.0, seq: GreedySequence | None = None) -> RateProfile:
    """n * e_s of the quadratic greedy sequence; s = r gives the rate profile itself."""
    d = 1
    if not r <= s < d + r:
        raise DomainError(f"mismatch order must lie in [{r}, {d + r}), got {s}")
    if N < 2:
        raise DomainError(f"a mismatch profile needs N >= 2, got {N}")
    seq = build(dist, N) if seq is None else truncate(seq, N)
    return _profile(seq, s, "quadrature", with_bound=False)


# ---------------------------------------------------------- limit weights


@dataclass(frozen=True, eq=False)
class LimitWeights:
    weights: np.ndarray
    total: float
    constant: float


def limit_weights(seq: GreedySequence, p: float = 2.0) -> LimitWeights:
    """Predicted cell weights f^{p/(1+p)}(a_i) / (C n) of an asymptotically optimal grid."""
    d = 1
    dist = seq.dist
    lo, hi = dist.support()
    cuts = [lo, *dist.breakpoints, hi]
    if dist.kind is Kind.NORMAL:
        cuts = [lo, dist.mean, hi]
    mass = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        value, _ = integrate.quad(lambda t: dist.pdf(t) ** (d / (d + p)), a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
        mass += value
    constant = 1.0 / mass
    pts = np.asarray(seq.sorted_points)
    weights = np.asarray(dist.pdf(pts)) ** (p / (d + p)) / (constant * seq.n)
    return LimitWeights(weights=np.atleast_1d(weights), total=float(np.sum(weights)), constant=constant)


def limit_weights_l1(seq: GreedySequence, p: float = 2.0) -> float:
    return float(np.sum(np.abs(np.asarray(seq.weights) - limit_weights(seq, p).weights)))


# ------------------------------------------------------------ sub-optimality


def is_unimodal(weights: Sequence[float], tol: float = 1e-12) -> bool:
    """Single local maximum, flat stretches allowed."""
    w = np.asarray(weights, dtype=float)
    if w.size < 3:
        return True
    diffs = np.diff(w)
    signs = np.sign(np.where(np.abs(diffs) > tol * w.max(), diffs, 0.0))
    signs = signs[signs != 0]
    falling = np.flatnonzero(signs < 0)
    return falling.size == 0 or not np.any(signs[falling[0]:] > 0)


def uniform_suboptimal_levels(alpha0: int, limit: int) -> list[int]:
    """Levels alpha_0, alpha_1, ... <= limit of the mod-3 doubling recursion."""
    levels = [alpha0]
    k = 0
    while True:
        k += 1
        prev = levels[-1]
        if k % 3 == 1:
            nxt = 2 * prev + 1
        elif k % 3 == 2:
            nxt = 2 * (prev - 2) + 1
        else:
            nxt = 2 * (prev + 2) + 1
        if nxt > limit:
            return [a for a in levels if a <= limit]
        levels.append(nxt)


def default_checkpoints(dist: Distribution1D, n: int) -> list[int]:
    if dist.kind is Kind.UNIFORM:
        return sorted(set(uniform_suboptimal_levels(3, n)) | set(uniform_suboptimal_levels(11, n)))
    return [2**k - 1 for k in range(2, n.bit_length() + 1) if 2**k - 1 <= n]


def quadratic_error(dist: Distribution1D, points) -> float:
    x = np.sort(np.asarray(points, dtype=float))
    left = np.concatenate(([-math.inf], x))
    right = np.concatenate((x, [math.inf]))
    return math.sqrt(math.fsum(gap_inertia(dist, left, right)))


def lloyd_optimal(
    dist: Distribution1D,
    init_points,
    *,
    tol: float = 1e-12,
    max_iter: int | None = None,
    restarts: int = 0,
    seed: int | None = None,
) -> tuple[np.ndarray, float]:
    """Batch Lloyd iteration from ``init_points`` plus optional random restarts."""
    max_iter = greedy_config.lloyd_max_iter if max_iter is None else max_iter
    rng = np.random.default_rng(greedy_config.seed if seed is None else seed)
    starts = [np.sort(np.asarray(init_points, dtype=float))]
    n = starts[0].size
    for _ in range(restarts):
        starts.append(np.sort(np.asarray(dist.quantile(rng.uniform(0.01, 0.99, size=n)), dtype=float).reshape(-1)))

    best_points, best_error = starts[0], math.inf
    for x in starts:
        for it in range(max_iter):
            mids = 0.5 * (x[:-1] + x[1:])
            lo = np.concatenate(([-math.inf], mids))
            hi = np.concatenate((mids, [math.inf]))
            m0, m1, _ = dist.moments(lo, hi)
            moved = np.where(m0 > 0.0, m1 / np.where(m0 > 0.0, m0, 1.0), x)
            shift = float(np.max(np.abs(moved - x)))
            x = moved
            if shift < tol:
                break
        else:
            logger.warning("Lloyd stopped after %d iterations at n=%d", max_iter, n)
        error = quadratic_error(dist, x)
        if error < best_error:
            best_points, best_error = x, error
    return best_points, best_error


@dataclass(frozen=True)
class SubOptimalReport:
    checked: list[int]
    unimodal_at: list[int]
    optimal_gap: list[tuple[int, float]]


def suboptimal_check(
    seq: GreedySequence,
    checkpoints: Iterable[int] | None = None,
    *,
    with_oracle: bool = True,
    restart_limit: int = 63,
) -> SubOptimalReport:
    """Unimodality of the weights and greedy / Lloyd error ratios at checkpoints."""
    levels = list(checkpoints) if checkpoints is not None else default_checkpoints(seq.dist, seq.n)
    unimodal, ratios = [], []
    for n in levels:
        prefix = truncate(seq, n)
        if is_unimodal(prefix.weights):
            unimodal.append(n)
        if with_oracle:
            _, optimal = lloyd_optimal(seq.dist, prefix.sorted_points, restarts=5 if n <= restart_limit else 0)
            ratios.append((n, prefix.error / optimal))
            logger.info("n=%d greedy/optimal error ratio %.6f", n, ratios[-1][1])
    return SubOptimalReport(checked=levels, unimodal_at=unimodal, optimal_gap=ratios)


# -------------------------------------------------------------- stationarity


def _displacements(seq: GreedySequence) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(seq.sorted_points)
    mids = 0.5 * (pts[:-1] + pts[1:])
    lo = np.concatenate(([-math.inf], mids))
    hi = np.concatenate((mids, [math.inf]))
    m0, m1, _ = seq.dist.moments(lo, hi)
    positive = m0 > 0.0
    means = np.where(positive, m1 / np.where(positive, m0, 1.0), pts)
    return np.abs(pts - means), m0


def stationarity_gap(seq: GreedySequence) -> float:
    """sum_i |a_i - E[X | X in cell i]|."""
    return float(np.sum(_displacements(seq)[0]))


@dataclass(frozen=True)
class QuasiStationarityRow:
    n: int
    weighted: float
    unweighted: float
    denominator: float


def _quasi_check(r: int, rho: float) -> None:
    if r not in (1, 2):
        raise DomainError(f"quasi-stationarity numerator order must be 1 or 2, got {r}")
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")


def _quasi_row(seq: GreedySequence, r: int, denominator: float) -> QuasiStationarityRow:
    disp, weights = _displacements(seq)
    weighted = float(np.sum(weights * disp**r)) ** (1.0 / r)
    return QuasiStationarityRow(
        n=seq.n, weighted=weighted / denominator, unweighted=float(np.sum(disp)) / denominator, denominator=denominator
    )


def quasi_stationarity_ratio(seq: GreedySequence, r: int, rho: float) -> float:
    """||X^ - E(X | X^)||_r under the grid weights, over e_{1+rho}^{1+rho}."""
    _quasi_check(r, rho)
    denominator = error_lr_trace(seq, 1.0 + rho, method="quadrature")[-1] ** (1.0 + rho)
    return _quasi_row(seq, r, denominator).weighted


def quasi_stationarity_profile(seq: GreedySequence, r: int, rho: float, levels: Iterable[int]) -> list[QuasiStationarityRow]:
    _quasi_check(r, rho)
    levels = sorted(levels)
    denominators = error_lr_trace(truncate(seq, levels[-1]), 1.0 + rho, method="quadrature") ** (1.0 + rho)
    return [_quasi_row(truncate(seq, n), r, float(denominators[n - 1])) for n in levels]


# --------------------------------------------------------- grid discrepancy


@dataclass(frozen=True)
class DiscrepancyRow:
    n: int
    greedy: float
    halton: float


def product_discrepancy_profile(sizes: Iterable[int]) -> list[DiscrepancyRow]:
    """Star discrepancy of the greedy U(0,1)^2 product grid next to as many Halton points."""
    grid = product_grid([Distribution1D.uniform()] * 2)
    rows = []
    for target in sorted(sizes):
        grid = grow_to(grid, target)
        n = grid.size
        rows.append(DiscrepancyRow(
            n=n,
            greedy=star_disc_2d(PointSet(product_points(grid))),
            halton=star_disc_2d(PointSet(halton_points(n, 2))),
        ))
        logger.info("n=%d greedy D*=%.6g halton D*=%.6g", n, rows[-1].greedy, rows[-1].halton)
    return rows
