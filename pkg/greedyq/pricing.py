"""Black-Scholes benchmarks for quantization-based cubature.

European call in one dimension (greedy grids against Van der Corput points)
and an arithmetic basket call in three dimensions (product and Box-Muller
grids against Monte Carlo with a geometric control variate).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import special

from .config import greedy_config
from .distributions import Distribution1D
from .errors import DomainError
from .greedy1d import GreedySequence, build
from .product_grid import GaussianGrid

logger = logging.getLogger(__name__)

CALL_REFERENCE = 1.5429


@dataclass(frozen=True, eq=False)
class BsParams:
    spots: tuple[float, ...]
    strike: float
    rate: float
    vols: tuple[float, ...]
    maturity: float
    weights: tuple[float, ...] = (1.0,)
    corr: np.ndarray = field(default_factory=lambda: np.eye(1))

    def __post_init__(self):
        d = len(self.spots)
        corr = np.asarray(self.corr, dtype=float)
        object.__setattr__(self, "corr", corr)
        if len(self.vols) != d or len(self.weights) != d or corr.shape != (d, d):
            raise DomainError(f"inconsistent basket dimensions: {d} spots, {len(self.vols)} vols, "
                              f"{len(self.weights)} weights, correlation {corr.shape}")
        if min(self.spots) <= 0 or min(self.vols) <= 0 or self.strike < 0 or self.maturity <= 0:
            raise DomainError("spots, vols and maturity must be positive and the strike nonnegative")
        if min(self.weights) <= 0 or abs(sum(self.weights) - 1.0) > 1e-12:
            raise DomainError(f"basket weights must be positive and sum to 1, got {self.weights}")
        if not np.allclose(corr, corr.T) or not np.allclose(np.diag(corr), 1.0):
            raise DomainError("correlation must be symmetric with unit diagonal")
        try:
            np.linalg.cholesky(corr)
        except np.linalg.LinAlgError:
            raise DomainError("correlation matrix has no Cholesky factor") from None

    @property
    def d(self) -> int:
        return len(self.spots)

    @property
    def discount(self) -> float:
        return math.exp(-self.rate * self.maturity)

    @property
    def vol_matrix(self) -> np.ndarray:
        """sigma_ij = sigma_i L_ij with L the lower Cholesky factor of the correlation."""
        return np.asarray(self.vols)[:, None] * np.linalg.cholesky(self.corr)

    @classmethod
    def call(cls, spot: float, strike: float, rate: float, vol: float, maturity: float) -> "BsParams":
        return cls(spots=(spot,), strike=strike, rate=rate, vols=(vol,), maturity=maturity)


def call_reference_params() -> BsParams:
    return BsParams.call(spot=10.0, strike=9.0, rate=0.06, vol=0.1, maturity=1.0)


def basket_reference_params() -> BsParams:
    corr = np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.0], [0.5, 0.0, 1.0]])
    return BsParams(
        spots=(100.0, 100.0, 100.0),
        strike=100.0,
        rate=0.1,
        vols=(0.3, 0.3, 0.3),
        maturity=1.0,
        weights=(1 / 3, 1 / 3, 1 / 3),
        corr=corr,
    )


def bs_call_closed_form(spot: float, strike: float, rate: float, sigma: float, maturity: float) -> float:
    """Discounted Black-Scholes call price."""
    if spot <= 0 or strike <= 0 or sigma <= 0 or maturity <= 0:
        raise DomainError("Black-Scholes inputs must be positive")
    vol = sigma * math.sqrt(maturity)
    d1 = (math.log(spot / strike) + (rate + 0.5 * sigma**2) * maturity) / vol
    d2 = d1 - vol
    return float(spot * special.ndtr(d1) - strike * math.exp(-rate * maturity) * special.ndtr(d2))


# ---------------------------------------------------------------- 1-D call


def terminal_spot(z, params: BsParams) -> np.ndarray:
    s0, sigma, t = params.spots[0], params.vols[0], params.maturity
    return s0 * np.exp((params.rate - 0.5 * sigma**2) * t + sigma * math.sqrt(t) * np.asarray(z, dtype=float))


def price_call_1d(points, weights, params: BsParams) -> float:
    """sum_i w_i e^{-rT} (X_T(z_i) - K)_+ over Z-space abscissae."""
    weights = np.asarray(weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-10:
        raise DomainError(f"weights sum to {weights.sum()!r}")
    payoff = np.maximum(terminal_spot(points, params) - params.strike, 0.0)
    return params.discount * float(np.dot(weights, payoff))


def radical_inverse(k: np.ndarray, base: int) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64).copy()
    out = np.zeros(k.shape)
    scale = 1.0 / base
    while np.any(k > 0):
        out += (k % base) * scale
        k //= base
        scale /= base
    return out


def vdc_points(n: int, base: int = 2) -> np.ndarray:
    """Van der Corput radical inverses of 1..n."""
    if n < 1 or base < 2:
        raise DomainError(f"need n >= 1 and base >= 2, got n={n}, base={base}")
    return radical_inverse(np.arange(1, n + 1), base)


_PRIMES = (2, 3, 5, 7, 11, 13)


def halton_points(n: int, d: int) -> np.ndarray:
    if not 1 <= d <= len(_PRIMES):
        raise DomainError(f"Halton points available for d <= {len(_PRIMES)}, got {d}")
    return np.stack([vdc_points(n, b) for b in _PRIMES[:d]], axis=1)


def voronoi_weights(dist: Distribution1D, points) -> tuple[np.ndarray, np.ndarray]:
    """Sorted points and the probabilities of their Voronoi cells."""
    x = np.sort(np.asarray(points, dtype=float))
    mids = 0.5 * (x[:-1] + x[1:])
    cdf = np.concatenate(([0.0], np.asarray(dist.cdf(mids)).reshape(-1), [1.0]))
    return x, np.diff(cdf)


CALL_METHODS = ("greedy", "greedy-uniform", "vdc-weighted", "vdc-uniform")


def call_grid(method: str, n: int, *, seq: GreedySequence | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Z-space abscissae and weights of one of the 1-D pricing grids."""
    normal = Distribution1D.normal()
    if method == "greedy":
        seq = seq if seq is not None and seq.n == n else build(normal, n)
        return np.asarray(seq.sorted_points), np.asarray(seq.weights)
    if method == "greedy-uniform":
        seq = seq if seq is not None and seq.n == n else build(Distribution1D.uniform(), n)
        return np.asarray(normal.quantile(np.asarray(seq.sorted_points))).reshape(-1), np.asarray(seq.weights)
    if method == "vdc-weighted":
        return voronoi_weights(normal, normal.quantile(vdc_points(n)))
    if method == "vdc-uniform":
        return np.asarray(normal.quantile(vdc_points(n))).reshape(-1), np.full(n, 1.0 / n)
    raise DomainError(f"unknown 1-D pricing method '{method}', choose from {CALL_METHODS}")


# ------------------------------------------------------------- 3-D basket


def basket_payoff(params: BsParams) -> Callable[[np.ndarray], np.ndarray]:
    """Discounted basket payoff as a function of standard normal points (m, d)."""
    drift = (params.rate - 0.5 * np.asarray(params.vols) ** 2) * params.maturity
    loadings = params.vol_matrix * math.sqrt(params.maturity)
    spots, weights = np.asarray(params.spots), np.asarray(params.weights)

    def payoff(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.ndim != 2 or z.shape[1] != params.d:
            raise DomainError(f"basket of dimension {params.d} evaluated on points of shape {z.shape}")
        assets = spots * np.exp(drift + z @ loadings.T)
        return params.discount * np.maximum(assets @ weights - params.strike, 0.0)

    return payoff


def price_basket_quant(grid: GaussianGrid, params: BsParams) -> float:
    if grid.d != params.d:
        raise DomainError(f"{grid.d}-dimensional grid for a {params.d}-asset basket")
    return float(np.dot(grid.weights, basket_payoff(params)(grid.points)))


def geometric_control(params: BsParams) -> tuple[float, float]:
    """Spot and vol of exp(sum w_i log X_i), a Black-Scholes asset in its own right."""
    w = np.asarray(params.weights)
    sig = params.vol_matrix
    vol = float(math.sqrt(w @ sig @ sig.T @ w))
    spot = float(np.prod(np.asarray(params.spots) ** w))
    spot *= math.exp(-0.5 * params.maturity * (float(w @ np.asarray(params.vols) ** 2) - vol**2))
    return spot, vol


class MonteCarloEstimate(NamedTuple):
    price: float
    stderr: float


def _mc(params: BsParams, samples: int, seed: int, batch: int | None, control: bool) -> MonteCarloEstimate:
    if samples < 1:
        raise DomainError(f"sample count must be positive, got {samples}")
    batch = greedy_config.mc_batch if batch is None else batch
    payoff = basket_payoff(params)
    w = np.asarray(params.weights)
    drift = (params.rate - 0.5 * np.asarray(params.vols) ** 2) * params.maturity
    loadings = params.vol_matrix * math.sqrt(params.maturity)
    log_spots = np.log(np.asarray(params.spots))
    anchor = 0.0
    if control:
        g_spot, g_vol = geometric_control(params)
        anchor = bs_call_closed_form(g_spot, params.strike, params.rate, g_vol, params.maturity) if params.strike > 0 else g_spot

    sizes = [batch] * (samples // batch) + ([samples % batch] if samples % batch else [])
    # one child stream per batch, spawned in batch order from the master seed
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    total, total_sq = 0.0, 0.0
    for size, child in zip(sizes, children):
        rng = np.random.default_rng(child)
        z = special.ndtri(rng.random((size, params.d)))
        y = payoff(z)
        if control:
            geometric = np.exp((log_spots + drift + z @ loadings.T) @ w)
            y = y - params.discount * np.maximum(geometric - params.strike, 0.0)
        total += float(y.sum())
        total_sq += float(np.dot(y, y))
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0) * samples / max(samples - 1, 1)
    estimate = MonteCarloEstimate(price=mean + anchor, stderr=math.sqrt(var / samples))
    logger.info("MC%s with %d samples: %.6f +/- %.6f", "+CV" if control else "", samples, *estimate)
    return estimate


def price_basket_mc_cv(params: BsParams, M: int, seed: int, *, batch: int | None = None) -> MonteCarloEstimate:
    """Plain MC of h_T - k_T plus the closed-form price of the geometric basket call k_T."""
    return _mc(params, M, seed, batch, control=True)


def price_basket_mc(params: BsParams, M: int, seed: int, *, batch: int | None = None) -> MonteCarloEstimate:
    return _mc(params, M, seed, batch, control=False)
