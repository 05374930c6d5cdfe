"""Exact star discrepancy of small point sets in [0,1]^d, d <= 3."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution1D
from .errors import ComplexityError, DomainError
from .greedy1d import GreedySequence

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True, eq=False)
class PointSet:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] not in (1, 2, 3):
            raise DomainError(f"expected n >= 1 points of dimension 1, 2 or 3, got shape {pts.shape}")
        if np.any(pts < 0.0) or np.any(pts > 1.0):
            raise DomainError("point coordinates must lie in [0, 1]")
        object.__setattr__(self, "points", pts)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _require(ps: PointSet, d: int) -> np.ndarray:
    if ps.d != d:
        raise DomainError(f"expected a {d}-dimensional point set, got d={ps.d}")
    return ps.points


def star_disc_1d(ps: PointSet) -> float:
    x = np.sort(_require(ps, 1)[:, 0])
    n = x.size
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - x, x - (i - 1) / n)))


def star_disc_2d(ps: PointSet) -> float:
    pts = _require(ps, 2)
    n = pts.shape[0]
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    x1 = np.concatenate(([0.0], pts[:, 0], [1.0]))
    best = 0.0
    # i = 0 covers the empty boxes left of the first point
    for i in range(n + 1):
        xi = np.concatenate(([0.0], np.sort(pts[:i, 1]), [1.0]))
        k = np.arange(i + 1)
        lower = k / n - x1[i] * xi[:-1]
        upper = x1[i + 1] * xi[1:] - k / n
        best = max(best, float(np.max(np.maximum(lower, upper))))
    return best


def star_disc_3d(ps: PointSet) -> float:
    pts = _require(ps, 3)
    n = pts.shape[0]
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    x1 = np.concatenate(([0.0], pts[:, 0], [1.0]))
    best = 0.0
    for i in range(n + 1):
        head = pts[:i]
        by_second = head[np.argsort(head[:, 1], kind="stable")]
        xi = np.concatenate(([0.0], by_second[:, 1], [1.0]))
        for k in range(i + 1):
            # third coordinates of the k points with the smallest second coordinate
            eta = np.concatenate(([0.0], np.sort(by_second[:k, 2]), [1.0]))
            ell = np.arange(k + 1)
            lower = ell / n - x1[i] * xi[k] * eta[:-1]
            upper = x1[i + 1] * xi[k + 1] * eta[1:] - ell / n
            best = max(best, float(np.max(np.maximum(lower, upper))))
    return best


def star_disc(ps: PointSet) -> float:
    return (star_disc_1d, star_disc_2d, star_disc_3d)[ps.d - 1](ps)


def star_disc_bruteforce(ps: PointSet) -> float:
    """Discrepancy over every critical anchored box, open and closed counts."""
    if ps.n > BRUTE_FORCE_LIMIT:
        raise ComplexityError(f"brute force is limited to {BRUTE_FORCE_LIMIT} points, got {ps.n}")
    pts, n = ps.points, ps.n
    axes = [np.unique(np.concatenate((pts[:, j], [1.0]))) for j in range(ps.d)]
    best = 0.0
    for corner in itertools.product(*axes):
        u = np.asarray(corner)
        volume = float(np.prod(u))
        closed = int(np.all(pts <= u, axis=1).sum())
        opened = int(np.all(pts < u, axis=1).sum())
        best = max(best, closed / n - volume, volume - opened / n)
    return best


def uniform_l1_error(points) -> float:
    """L^1 quantization error of any point set in [0,1] for U(0,1), in closed form."""
    x = np.sort(np.asarray(points, dtype=float).reshape(-1))
    if x.size == 0 or x[0] < 0.0 or x[-1] > 1.0:
        raise DomainError("need at least one point inside [0, 1]")
    mids = 0.5 * (x[:-1] + x[1:])
    lo = np.concatenate(([0.0], mids))
    hi = np.concatenate((mids, [1.0]))
    return float(0.5 * np.sum((x - lo) ** 2 + (hi - x) ** 2))


def quantization_error_vs_disc(seq: GreedySequence) -> tuple[float, float]:
    """(e_1, D_n^*) of a U(0,1) greedy grid, e_1 never exceeding D_n^*."""
    if seq.dist != Distribution1D.uniform(0.0, 1.0):
        raise DomainError(f"the L^1 / discrepancy link needs U(0,1), got {seq.dist.spec}")
    return uniform_l1_error(seq.sorted_points), star_disc_1d(PointSet(np.asarray(seq.sorted_points)))
