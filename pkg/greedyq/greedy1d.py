"""Quadratic greedy quantization sequences of one-dimensional laws.

A greedy sequence adds one point at a time, each one minimising the quadratic
quantization error given every earlier point frozen. Inserting a point only
changes the gap it lands in, so the builder keeps three ledgers that are
updated locally at each step:

* ``inertias``: one local inter-point inertia per gap between consecutive
  sorted points, ``n + 1`` gaps in total counting the two half-lines at the
  ends. Their sum is the squared quadratic error.
* ``weights``: the Voronoi cell probabilities over the sorted points.
* ``candidates``: the best insertion point of every gap and its gain.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .config import greedy_config
from .distributions import Distribution1D
from .errors import DomainError

logger = logging.getLogger(__name__)


class Candidate(NamedTuple):
    x: float
    gain: float


@dataclass(frozen=True)
class InsertionStep:
    """Geometry of one insertion, enough to replay cubature updates.

    ``i0`` is the 0-based sorted position of the new point after insertion;
    ``left_idx``/``right_idx`` are insertion-order indices of its sorted
    neighbours (None at the ends). ``p_minus``/``p_plus`` are the masses the
    new cell takes from the left and right neighbour cells.
    """

    index: int
    i0: int
    left_idx: int | None
    right_idx: int | None
    p_minus: float
    p_plus: float
    gain: float


@dataclass(frozen=True)
class GreedySequence:
    dist: Distribution1D
    points: tuple[float, ...]
    sorted_index: tuple[int, ...]
    sorted_points: tuple[float, ...]
    inertias: tuple[float, ...]
    weights: tuple[float, ...]
    steps: tuple[InsertionStep, ...]
    error_sq_trace: tuple[float, ...]
    candidates: tuple[Candidate, ...] | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def error_sq(self) -> float:
        return self.error_sq_trace[-1]

    @property
    def error(self) -> float:
        return math.sqrt(max(self.error_sq, 0.0))

    def gap_bounds(self, j: int) -> tuple[float, float]:
        """Endpoints of gap ``j`` (between sorted points j-1 and j)."""
        sp = self.sorted_points
        left = sp[j - 1] if j > 0 else -math.inf
        right = sp[j] if j < len(sp) else math.inf
        return left, right


# ---------------------------------------------------------------- kernels


def _sq_deviation(dist: Distribution1D, lo, hi, c):
    m0, m1, m2 = dist.moments(lo, hi)
    return np.maximum(m2 - 2.0 * c * m1 + c * c * m0, 0.0)


def gap_inertia(dist: Distribution1D, left, right):
    """Local inter-point inertia of the gap (left, right), vectorised.

    Mass left of the midpoint is charged to ``left``, the rest to ``right``;
    an infinite end sends the whole gap to the finite neighbour.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    fl, fr = np.isfinite(left), np.isfinite(right)
    with np.errstate(invalid="ignore"):
        mid = np.where(fl & fr, 0.5 * (left + right), np.where(fl, math.inf, -math.inf))
    lc = np.where(fl, left, 0.0)
    rc = np.where(fr, right, 0.0)
    lower = _sq_deviation(dist, lc, np.where(fl, mid, 0.0), lc)
    upper = _sq_deviation(dist, np.where(fr, mid, 0.0), rc, rc)
    return lower + upper


def _cell_bounds(sorted_points):
    sp = np.asarray(sorted_points, dtype=float)
    mids = 0.5 * (sp[:-1] + sp[1:])
    lo = np.concatenate(([-math.inf], mids))
    hi = np.concatenate((mids, [math.inf]))
    return lo, hi


def _ledgers(dist: Distribution1D, sorted_points) -> tuple[tuple[float, ...], tuple[float, ...]]:
    sp = np.asarray(sorted_points, dtype=float)
    left = np.concatenate(([-math.inf], sp))
    right = np.concatenate((sp, [math.inf]))
    inertias = gap_inertia(dist, left, right)
    lo, hi = _cell_bounds(sp)
    weights = dist.moments(lo, hi)[0]
    return tuple(float(v) for v in inertias), tuple(float(v) for v in weights)


def power_deviation(dist: Distribution1D, lo: float, hi: float, c: float, r: float) -> float:
    """Integral of |t - c|^r against the density over [lo, hi]."""
    s_lo, s_hi = dist.support()
    lo, hi = max(lo, s_lo), min(hi, s_hi)
    if not hi > lo:
        return 0.0
    cuts = [lo, *(b for b in dist.breakpoints if lo < b < hi), hi]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        value, _ = integrate.quad(
            lambda t: abs(t - c) ** r * dist.pdf(t),
            a,
            b,
            epsabs=greedy_config.quad_epsabs,
            epsrel=greedy_config.quad_epsrel,
            limit=200,
        )
        total += value
    return total


def gap_lr_inertia(dist: Distribution1D, left: float, right: float, r: float) -> float:
    """L^r analogue of gap_inertia, by adaptive quadrature."""
    if math.isfinite(left) and math.isfinite(right):
        mid = 0.5 * (left + right)
    else:
        mid = math.inf if math.isfinite(left) else -math.inf
    total = 0.0
    if math.isfinite(left):
        total += power_deviation(dist, left, mid, left, r)
    if math.isfinite(right):
        total += power_deviation(dist, mid, right, right, r)
    return total


# ----------------------------------------------------------- candidate search


def local_candidate(
    dist: Distribution1D,
    left: float,
    right: float,
    *,
    seeds: int | None = None,
    tail: float | None = None,
    max_iter: int | None = None,
) -> Candidate:
    """Best single insertion inside the gap (left, right), neighbours frozen.

    Seeds the closed-form gain on equal subdivisions of the gap (clipped to
    the effective support) and refines the best seed with the one-point
    Lloyd fixed point.
    """
    seeds = greedy_config.search_seeds if seeds is None else seeds
    max_iter = greedy_config.fixed_point_max_iter if max_iter is None else max_iter
    lo_eff, hi_eff = dist.effective_support(tail)
    a = left if math.isfinite(left) else lo_eff
    b = right if math.isfinite(right) else hi_eff
    mass = float(dist.moments(left, right)[0])
    if not b > a or mass <= 0.0:
        return Candidate(0.5 * (a + b), 0.0)

    base = float(gap_inertia(dist, left, right))
    grid = a + (np.arange(seeds) + 0.5) * ((b - a) / seeds)
    gains = base - gap_inertia(dist, left, grid) - gap_inertia(dist, grid, right)
    x = float(grid[int(np.argmax(gains))])

    for _ in range(max_iter):
        cell_lo = 0.5 * (left + x) if math.isfinite(left) else -math.inf
        cell_hi = 0.5 * (x + right) if math.isfinite(right) else math.inf
        m0, m1, _ = dist.moments(cell_lo, cell_hi)
        if m0 <= 0.0:
            break
        moved = float(m1 / m0)
        done = abs(moved - x) < 1e-12 * (1.0 + abs(x))
        x = moved
        if done:
            break

    x = float(np.clip(x, a, b))
    gain = base - float(gap_inertia(dist, left, x)) - float(gap_inertia(dist, x, right))
    return Candidate(x, max(gain, 0.0))


def _all_candidates(seq: GreedySequence) -> tuple[Candidate, ...]:
    return tuple(local_candidate(seq.dist, *seq.gap_bounds(j)) for j in range(seq.n + 1))


# -------------------------------------------------------------- construction


def init(dist: Distribution1D) -> GreedySequence:
    """Level-one sequence: the mean, whose error is the standard deviation."""
    a1 = dist.lr_median(2)
    inertias, weights = _ledgers(dist, (a1,))
    candidates = (local_candidate(dist, -math.inf, a1), local_candidate(dist, a1, math.inf))
    return GreedySequence(
        dist=dist,
        points=(a1,),
        sorted_index=(0,),
        sorted_points=(a1,),
        inertias=inertias,
        weights=(1.0,),
        steps=(),
        error_sq_trace=(dist.variance,),
        candidates=candidates,
    )


def _insert(seq: GreedySequence, j: int, x: float, gain: float) -> GreedySequence:
    dist, n = seq.dist, seq.n
    left, right = seq.gap_bounds(j)
    sp = seq.sorted_points[:j] + (x,) + seq.sorted_points[j:]

    g_left, g_right = gap_inertia(dist, [left, x], [x, right])
    inertias = seq.inertias[:j] + (float(g_left), float(g_right)) + seq.inertias[j + 1:]

    first, last = max(j - 1, 0), min(j + 1, n)
    lo, hi = _cell_bounds(sp)
    fresh = dist.moments(lo[first:last + 1], hi[first:last + 1])[0]
    weights = seq.weights[:first] + tuple(float(w) for w in fresh) + seq.weights[j + 1:]

    has_left, has_right = math.isfinite(left), math.isfinite(right)
    if has_left and has_right:
        split = 0.5 * (left + right)
        p_minus = float(dist.moments(0.5 * (left + x), split)[0])
        p_plus = float(dist.moments(split, 0.5 * (x + right))[0])
    elif has_left:
        p_minus, p_plus = float(dist.moments(0.5 * (left + x), math.inf)[0]), 0.0
    else:
        p_minus, p_plus = 0.0, float(dist.moments(-math.inf, 0.5 * (x + right))[0])

    step = InsertionStep(
        index=n,
        i0=j,
        left_idx=seq.sorted_index[j - 1] if has_left else None,
        right_idx=seq.sorted_index[j] if has_right else None,
        p_minus=p_minus,
        p_plus=p_plus,
        gain=gain,
    )

    candidates = None
    if seq.candidates is not None:
        fresh_candidates = (local_candidate(dist, left, x), local_candidate(dist, x, right))
        candidates = seq.candidates[:j] + fresh_candidates + seq.candidates[j + 1:]

    return replace(
        seq,
        points=seq.points + (x,),
        sorted_index=seq.sorted_index[:j] + (n,) + seq.sorted_index[j:],
        sorted_points=sp,
        inertias=inertias,
        weights=weights,
        steps=seq.steps + (step,),
        error_sq_trace=seq.error_sq_trace + (seq.error_sq - gain,),
        candidates=candidates,
    )


def insert_next(seq: GreedySequence, *, tie_tolerance: float | None = None) -> GreedySequence:
    """Insert the globally best candidate; ties go to the leftmost gap."""
    tie_tolerance = greedy_config.tie_tolerance if tie_tolerance is None else tie_tolerance
    candidates = seq.candidates if seq.candidates is not None else _all_candidates(seq)
    seq = replace(seq, candidates=candidates)
    gains = np.fromiter((c.gain for c in candidates), dtype=float, count=len(candidates))
    best = gains.max()
    j = int(np.flatnonzero(gains >= best - tie_tolerance * abs(best))[0])
    chosen = candidates[j]
    return _insert(seq, j, chosen.x, chosen.gain)


def build(dist: Distribution1D, n: int) -> GreedySequence:
    if n < 1:
        raise DomainError(f"sequence length must be positive, got {n}")
    seq = init(dist)
    for _ in range(n - 1):
        seq = insert_next(seq)
        if seq.n % 250 == 0:
            logger.debug("%s: %d points, e_2 = %.6e", dist.spec, seq.n, seq.error)
    logger.info("built %d-point greedy sequence of %s, e_2 = %.6e", seq.n, dist.spec, seq.error)
    return seq


def sequence_from_points(dist: Distribution1D, points) -> GreedySequence:
    """Replay a stored insertion order, rebuilding every ledger."""
    points = [float(p) for p in points]
    if not points:
        raise DomainError("cannot rebuild an empty sequence")
    a1 = points[0]
    inertias, weights = _ledgers(dist, (a1,))
    seq = GreedySequence(
        dist=dist,
        points=(a1,),
        sorted_index=(0,),
        sorted_points=(a1,),
        inertias=inertias,
        weights=weights,
        steps=(),
        error_sq_trace=(float(sum(inertias)),),
    )
    for x in points[1:]:
        j = int(np.searchsorted(seq.sorted_points, x))
        left, right = seq.gap_bounds(j)
        if x == left or x == right:
            raise DomainError(f"duplicate point {x} in stored sequence")
        gain = float(gap_inertia(dist, left, right) - gap_inertia(dist, left, x) - gap_inertia(dist, x, right))
        seq = _insert(seq, j, x, gain)
    return seq


def truncate(seq: GreedySequence, n: int) -> GreedySequence:
    """The level-``n`` prefix of a sequence, ledgers recomputed."""
    if not 1 <= n <= seq.n:
        raise DomainError(f"prefix length {n} outside 1..{seq.n}")
    if n == seq.n:
        return seq
    points = seq.points[:n]
    order = tuple(sorted(range(n), key=points.__getitem__))
    sp = tuple(points[i] for i in order)
    inertias, weights = _ledgers(seq.dist, sp)
    return GreedySequence(
        dist=seq.dist,
        points=points,
        sorted_index=order,
        sorted_points=sp,
        inertias=inertias,
        weights=weights,
        steps=seq.steps[:n - 1],
        error_sq_trace=seq.error_sq_trace[:n],
    )


def recompute_full(seq: GreedySequence) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """All inertias and weights from scratch, the oracle for the incremental ledgers."""
    return _ledgers(seq.dist, seq.sorted_points)


# ------------------------------------------------------------------- errors


def error_lr(seq: GreedySequence, r: float, *, method: str = "auto") -> float:
    """L^r quantization error of the current grid.

    ``method="auto"`` reads r=2 off the inertia ledger; anything else goes
    through per-gap quadrature.
    """
    if not r > 0:
        raise DomainError(f"error order must be positive, got {r}")
    if r == 2 and method == "auto":
        return math.sqrt(math.fsum(seq.inertias))
    total = math.fsum(gap_lr_inertia(seq.dist, *seq.gap_bounds(j), r) for j in range(seq.n + 1))
    return total ** (1.0 / r)


def error_lr_trace(seq: GreedySequence, r: float, *, method: str = "auto") -> np.ndarray:
    """e_r at every level 1..n, replaying the steps over a per-gap ledger."""
    if not r > 0:
        raise DomainError(f"error order must be positive, got {r}")
    if r == 2 and method == "auto":
        return np.sqrt(np.maximum(np.asarray(seq.error_sq_trace), 0.0))
    dist, pts = seq.dist, seq.points
    a1 = pts[0]
    ledger = [gap_lr_inertia(dist, -math.inf, a1, r), gap_lr_inertia(dist, a1, math.inf, r)]
    trace = [math.fsum(ledger)]
    for step in seq.steps:
        x = pts[step.index]
        left = pts[step.left_idx] if step.left_idx is not None else -math.inf
        right = pts[step.right_idx] if step.right_idx is not None else math.inf
        ledger[step.i0:step.i0 + 1] = [gap_lr_inertia(dist, left, x, r), gap_lr_inertia(dist, x, right, r)]
        trace.append(math.fsum(ledger))
    return np.asarray(trace) ** (1.0 / r)
