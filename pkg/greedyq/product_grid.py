"""Greedy product quantization in d dimensions.

A product grid tensorises d one-dimensional greedy sequences. Its squared
quadratic error is the (scaled) sum of the marginal squared errors, so growth
adds one point to whichever marginal lowers that sum the most. Gaussian grids
come either from Normal marginals directly or through the Box-Muller map of an
Exp(1) x U(0,1) pre-image.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .config import greedy_config
from .cubature import CubatureState
from .distributions import Distribution1D, Kind
from .errors import DomainError
from .greedy1d import GreedySequence, init, insert_next

logger = logging.getLogger(__name__)

FieldIntegrand = Callable[[np.ndarray], np.ndarray]

# squared-error factors turning U(0,1) into U(0, 2pi) and Exp(1) into Exp(1/2)
UNIFORM_ANGLE_SCALE = 4.0 * math.pi**2
EXPONENTIAL_RADIUS_SCALE = 4.0


@dataclass(frozen=True)
class ProductGrid:
    marginals: tuple[GreedySequence, ...]
    scales: tuple[float, ...]
    history: tuple[int, ...] = ()
    _lookahead: dict[int, GreedySequence] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.marginals:
            raise DomainError("a product grid needs at least one marginal")
        if len(self.scales) != len(self.marginals):
            raise DomainError(f"{len(self.scales)} scales for {len(self.marginals)} marginals")

    @property
    def d(self) -> int:
        return len(self.marginals)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(m.n for m in self.marginals)

    @property
    def size(self) -> int:
        return math.prod(self.sizes)

    def next_marginal(self, k: int) -> GreedySequence:
        """Marginal k with one more point, memoised until consumed by grow."""
        if k not in self._lookahead:
            self._lookahead[k] = insert_next(self.marginals[k])
        return self._lookahead[k]


class Provenance(str, Enum):
    PRODUCT = "product"
    BOX_MULLER = "boxmuller"


@dataclass(frozen=True, eq=False)
class GaussianGrid:
    points: np.ndarray
    weights: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[0] != self.weights.shape[0]:
            raise DomainError(f"{self.points.shape} points for {self.weights.shape} weights")
        if abs(float(self.weights.sum()) - 1.0) > 1e-10:
            raise DomainError(f"grid weights sum to {self.weights.sum()!r}")

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


def product_grid(marginals: Sequence[Distribution1D] | Sequence[GreedySequence], scales: Sequence[float] | None = None) -> ProductGrid:
    """Start a grid from laws (one point each) or from prebuilt sequences."""
    seqs = tuple(m if isinstance(m, GreedySequence) else init(m) for m in marginals)
    scales = tuple(float(s) for s in scales) if scales is not None else (1.0,) * len(seqs)
    return ProductGrid(marginals=seqs, scales=scales)


def product_error_sq(grid: ProductGrid) -> float:
    return math.fsum(s * m.error_sq for s, m in zip(grid.scales, grid.marginals))


def _identical_laws(grid: ProductGrid) -> bool:
    first = (grid.marginals[0].dist, grid.scales[0])
    return all((m.dist, s) == first for m, s in zip(grid.marginals, grid.scales))


def refinement_errors(grid: ProductGrid) -> list[float]:
    """E_k: the product error after refining marginal k alone."""
    terms = [s * m.error_sq for s, m in zip(grid.scales, grid.marginals)]
    total = math.fsum(terms)
    return [total - terms[k] + grid.scales[k] * grid.next_marginal(k).error_sq for k in range(grid.d)]


def choose_refinement(grid: ProductGrid, *, tie_tolerance: float | None = None) -> int:
    """Index of the marginal to refine next (0-based); ties go to the smallest index."""
    if _identical_laws(grid):
        # periodic: the lagging marginal with the smallest index
        return int(np.argmin(grid.sizes))
    tie_tolerance = greedy_config.tie_tolerance if tie_tolerance is None else tie_tolerance
    errors = np.asarray(refinement_errors(grid))
    best = errors.min()
    return int(np.flatnonzero(errors <= best + tie_tolerance * abs(best))[0])


def grow(grid: ProductGrid) -> ProductGrid:
    k = choose_refinement(grid)
    refined = grid.next_marginal(k)
    marginals = grid.marginals[:k] + (refined,) + grid.marginals[k + 1:]
    carried = {i: s for i, s in grid._lookahead.items() if i != k}
    logger.debug("refined marginal %d, sizes now %s", k, tuple(m.n for m in marginals))
    return ProductGrid(marginals=marginals, scales=grid.scales, history=grid.history + (k,), _lookahead=carried)


def grow_to(grid: ProductGrid, size: int) -> ProductGrid:
    """Grow until the tensor grid holds at least ``size`` points."""
    while grid.size < size:
        grid = grow(grid)
    return grid


def tensor_grid(seqs: Sequence[GreedySequence]) -> tuple[np.ndarray, np.ndarray]:
    """Row-major tensor points (m, len(seqs)) and product weights over sorted marginals."""
    if not seqs:
        return np.empty((1, 0)), np.ones(1)
    axes = [np.asarray(s.sorted_points) for s in seqs]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)
    weights = np.ones(1)
    for s in seqs:
        weights = np.multiply.outer(weights, np.asarray(s.weights)).reshape(-1)
    return points, weights


def product_weights(grid: ProductGrid) -> np.ndarray:
    return tensor_grid(grid.marginals)[1]


def product_points(grid: ProductGrid) -> np.ndarray:
    return tensor_grid(grid.marginals)[0]


def _field(f: FieldIntegrand, z: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(z), dtype=float)
    except (IndexError, ValueError) as exc:
        raise DomainError(f"integrand rejected {z.shape[1]}-dimensional points: {exc}") from exc
    if values.shape != (z.shape[0],):
        raise DomainError(f"integrand returned shape {values.shape} for {z.shape[0]} points of dimension {z.shape[1]}")
    return values


def integrate_product_full(grid: ProductGrid, f: FieldIntegrand) -> float:
    points, weights = tensor_grid(grid.marginals)
    return float(np.dot(weights, _field(f, points)))


def start_product(grid: ProductGrid, f: FieldIntegrand) -> CubatureState:
    return CubatureState(n=grid.size, value=integrate_product_full(grid, f))


def integrate_product_recursive(
    state: CubatureState,
    before: ProductGrid,
    after: ProductGrid,
    f: FieldIntegrand,
) -> CubatureState:
    """Advance the product integral across one grow.

    Only the cells sharing the refined marginal's three affected abscissae
    change; the other marginals enter through their previous-level points and
    weights.
    """
    if before.d != after.d or len(after.history) != len(before.history) + 1:
        raise DomainError("grids are not one grow apart")
    if state.n != before.size:
        raise DomainError(f"state at size {state.n} does not match grid size {before.size}")
    i = after.history[-1]
    seq = after.marginals[i]
    step = seq.steps[-1]
    others = [k for k in range(before.d) if k != i]
    other_points, other_weights = tensor_grid([before.marginals[k] for k in others])

    def evaluate(coordinate: float) -> np.ndarray:
        z = np.empty((other_points.shape[0], before.d))
        z[:, others] = other_points
        z[:, i] = coordinate
        return _field(f, z)

    fx = evaluate(seq.points[step.index])
    delta = 0.0
    if step.left_idx is not None:
        delta += step.p_minus * float(np.dot(other_weights, evaluate(seq.points[step.left_idx]) - fx))
    if step.right_idx is not None:
        delta += step.p_plus * float(np.dot(other_weights, evaluate(seq.points[step.right_idx]) - fx))
    return CubatureState(n=after.size, value=state.value - delta)


# ---------------------------------------------------------------- Gaussian


def gaussian_grid_from_product(grid: ProductGrid) -> GaussianGrid:
    if any(m.dist != Distribution1D.normal() for m in grid.marginals):
        raise DomainError("a Gaussian product grid needs N(0,1) marginals")
    points, weights = tensor_grid(grid.marginals)
    return GaussianGrid(points=points, weights=weights, provenance=Provenance.PRODUCT)


def box_muller_pre_image(d: int) -> ProductGrid:
    """Exp(1) x U(0,1) marginals, one pair per two Gaussian coordinates."""
    if d not in (2, 3):
        raise DomainError(f"Box-Muller grids are built for d in {{2, 3}}, got {d}")
    pairs = d - 1
    laws = [Distribution1D.exponential(1.0), Distribution1D.uniform(0.0, 1.0)] * pairs
    scales = [EXPONENTIAL_RADIUS_SCALE, UNIFORM_ANGLE_SCALE] * pairs
    return product_grid(laws, scales)


def box_muller_grid(exp_seqs: Sequence[GreedySequence], unif_seqs: Sequence[GreedySequence], d: int) -> GaussianGrid:
    """Image of the (E, U) product grid under Z = sqrt(2E) (cos 2piU, sin 2piU).

    For d=3 the second pair contributes only its cosine coordinate. Weights
    are the pre-image cell probabilities carried over to the image points.
    """
    if d not in (2, 3) or len(exp_seqs) != d - 1 or len(unif_seqs) != d - 1:
        raise DomainError(
            f"d={d} needs {d - 1} exponential and uniform sequences, got {len(exp_seqs)} and {len(unif_seqs)}"
        )
    if any(s.dist != Distribution1D.exponential(1.0) for s in exp_seqs):
        raise DomainError("radius sequences must follow Exp(1)")
    if any(s.dist.kind is not Kind.UNIFORM or s.dist.params != (0.0, 1.0) for s in unif_seqs):
        raise DomainError("angle sequences must follow U(0,1)")
    marginals = [s for pair in zip(exp_seqs, unif_seqs) for s in pair]
    pre, weights = tensor_grid(marginals)
    radius = np.sqrt(2.0 * pre[:, 0])
    angle = 2.0 * math.pi * pre[:, 1]
    columns = [radius * np.cos(angle), radius * np.sin(angle)]
    if d == 3:
        columns.append(np.sqrt(2.0 * pre[:, 2]) * np.cos(2.0 * math.pi * pre[:, 3]))
    return GaussianGrid(points=np.stack(columns, axis=1), weights=weights, provenance=Provenance.BOX_MULLER)


def box_muller_from_product(grid: ProductGrid) -> GaussianGrid:
    pairs = grid.d // 2
    return box_muller_grid(grid.marginals[0::2], grid.marginals[1::2], pairs + 1)
