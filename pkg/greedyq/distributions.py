"""Closed-form kernels for the one-dimensional laws used across greedyq.

Every law exposes its density, distribution function, quantile and the
truncated moments ``m_k = int_lo^hi x^k dP(x)`` for ``k = 0, 1, 2``. The moment
kernels are vectorised over interval endpoints and accept infinite bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from .config import greedy_config
from .errors import DomainError

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class Kind(str, Enum):
    NORMAL = "normal"
    UNIFORM = "uniform"
    EXPONENTIAL = "exp"
    LAPLACE = "laplace"


_ARITY = {Kind.NORMAL: 2, Kind.UNIFORM: 2, Kind.EXPONENTIAL: 1, Kind.LAPLACE: 2}


@dataclass(frozen=True)
class Interval:
    """Integration range, either end may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise DomainError(f"invalid interval [{self.lo}, {self.hi}]")


def _phi(z):
    return _INV_SQRT_2PI * np.exp(-0.5 * z * z)


def _zphi(z):
    with np.errstate(invalid="ignore"):
        return np.where(np.isfinite(z), z * _phi(z), 0.0)


def _normal_std_moments(a, b):
    # survival-side antiderivatives above the median keep tail cells accurate
    upper = a > 0.0
    m0 = np.where(upper, special.ndtr(-a) - special.ndtr(-b), special.ndtr(b) - special.ndtr(a))
    m1 = _phi(a) - _phi(b)
    m2 = m0 + _zphi(a) - _zphi(b)
    return m0, m1, m2


def _exp_tail(x, rate):
    """Upper antiderivatives int_x^inf t^k rate e^{-rate t} dt, x >= 0."""
    finite = np.isfinite(x)
    xs = np.where(finite, x, 0.0)
    e = np.where(finite, np.exp(-rate * xs), 0.0)
    s0 = e
    s1 = (xs + 1.0 / rate) * e
    s2 = (xs * xs + 2.0 * xs / rate + 2.0 / (rate * rate)) * e
    return s0, s1, s2


def _exponential_moments(a, b, rate):
    a = np.maximum(a, 0.0)
    b = np.maximum(b, 0.0)
    sa, sb = _exp_tail(a, rate), _exp_tail(b, rate)
    return tuple(u - v for u, v in zip(sa, sb))


def _laplace_std_moments(a, b):
    # negative half through the mirrored exponential tail
    an, bn = np.minimum(a, 0.0), np.minimum(b, 0.0)
    ga, gb = _exp_tail(-an, 1.0), _exp_tail(-bn, 1.0)
    neg = (0.5 * (gb[0] - ga[0]), -0.5 * (gb[1] - ga[1]), 0.5 * (gb[2] - ga[2]))
    ap, bp = np.maximum(a, 0.0), np.maximum(b, 0.0)
    sa, sb = _exp_tail(ap, 1.0), _exp_tail(bp, 1.0)
    pos = tuple(0.5 * (u - v) for u, v in zip(sa, sb))
    return tuple(u + v for u, v in zip(neg, pos))


def _uniform_moments(a, b, lo, hi):
    a = np.clip(a, lo, hi)
    b = np.clip(b, lo, hi)
    width = hi - lo
    return (b - a) / width, (b * b - a * a) / (2.0 * width), (b**3 - a**3) / (3.0 * width)


def _affine(moments, loc, scale):
    m0, m1, m2 = moments
    return m0, loc * m0 + scale * m1, loc * loc * m0 + 2.0 * loc * scale * m1 + scale * scale * m2


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class Distribution1D:
    """A one-dimensional law with closed-form kernels.

    ``params`` holds (mean, stdev) for Normal, (lo, hi) for Uniform, (rate,) for
    Exponential and (location, scale) for Laplace.
    """

    kind: Kind
    params: tuple[float, ...]

    def __post_init__(self):
        if len(self.params) != _ARITY[self.kind]:
            raise DomainError(f"{self.kind.value} takes {_ARITY[self.kind]} parameters, got {self.params}")
        if not all(math.isfinite(p) for p in self.params):
            raise DomainError(f"non-finite parameter in {self.params}")
        p = self.params
        if self.kind is Kind.UNIFORM and not p[1] > p[0]:
            raise DomainError(f"uniform needs hi > lo, got {p}")
        if self.kind in (Kind.NORMAL, Kind.LAPLACE) and not p[1] > 0:
            raise DomainError(f"{self.kind.value} scale must be positive, got {p[1]}")
        if self.kind is Kind.EXPONENTIAL and not p[0] > 0:
            raise DomainError(f"exponential rate must be positive, got {p[0]}")

    @classmethod
    def normal(cls, mean: float = 0.0, stdev: float = 1.0) -> "Distribution1D":
        return cls(Kind.NORMAL, (float(mean), float(stdev)))

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> "Distribution1D":
        return cls(Kind.UNIFORM, (float(lo), float(hi)))

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "Distribution1D":
        return cls(Kind.EXPONENTIAL, (float(rate),))

    @classmethod
    def laplace(cls, location: float = 0.0, scale: float = 1.0) -> "Distribution1D":
        return cls(Kind.LAPLACE, (float(location), float(scale)))

    @property
    def spec(self) -> str:
        """Canonical ``kind:p1,p2`` spelling accepted by parse_distribution."""
        return f"{self.kind.value}:" + ",".join(repr(p) for p in self.params)

    # ------------------------------------------------------------------ support

    def support(self) -> tuple[float, float]:
        if self.kind is Kind.UNIFORM:
            return self.params
        if self.kind is Kind.EXPONENTIAL:
            return 0.0, math.inf
        return -math.inf, math.inf

    def effective_support(self, tail: float | None = None) -> tuple[float, float]:
        """Search region of the greedy build: the true support for Uniform,
        the [tail, 1 - tail] quantile range otherwise."""
        if self.kind is Kind.UNIFORM:
            return self.params
        tail = greedy_config.tail_probability if tail is None else tail
        lo = self.quantile(tail)
        if self.kind is Kind.EXPONENTIAL:
            lo = 0.0
        return lo, self.quantile(1.0 - tail)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the density is not smooth, for quadrature splitting."""
        if self.kind is Kind.LAPLACE:
            return (self.params[0],)
        return ()

    # ---------------------------------------------------------------- kernels

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind is Kind.NORMAL:
            out = _phi((x - p[0]) / p[1]) / p[1]
        elif self.kind is Kind.UNIFORM:
            out = np.where((x >= p[0]) & (x <= p[1]), 1.0 / (p[1] - p[0]), 0.0)
        elif self.kind is Kind.EXPONENTIAL:
            out = np.where(x >= 0.0, p[0] * np.exp(-p[0] * np.maximum(x, 0.0)), 0.0)
        else:
            out = 0.5 / p[1] * np.exp(-np.abs(x - p[0]) / p[1])
        return _out(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind is Kind.NORMAL:
            out = special.ndtr((x - p[0]) / p[1])
        elif self.kind is Kind.UNIFORM:
            out = np.clip((x - p[0]) / (p[1] - p[0]), 0.0, 1.0)
        elif self.kind is Kind.EXPONENTIAL:
            out = -np.expm1(-p[0] * np.maximum(x, 0.0))
        else:
            y = (x - p[0]) / p[1]
            out = np.where(y < 0.0, 0.5 * np.exp(np.minimum(y, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(y, 0.0)))
        return _out(out)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind is Kind.NORMAL:
            out = special.ndtr(-(x - p[0]) / p[1])
        elif self.kind is Kind.EXPONENTIAL:
            out = np.exp(-p[0] * np.maximum(x, 0.0))
        elif self.kind is Kind.LAPLACE:
            y = (x - p[0]) / p[1]
            out = np.where(y > 0.0, 0.5 * np.exp(-np.maximum(y, 0.0)), 1.0 - 0.5 * np.exp(np.minimum(y, 0.0)))
        else:
            out = 1.0 - np.asarray(self.cdf(x))
        return _out(out)

    def quantile(self, prob):
        prob = np.asarray(prob, dtype=float)
        if np.any(~((prob > 0.0) & (prob < 1.0))):
            raise DomainError(f"quantile needs p in (0, 1), got {prob}")
        p = self.params
        if self.kind is Kind.NORMAL:
            out = p[0] + p[1] * special.ndtri(prob)
        elif self.kind is Kind.UNIFORM:
            out = p[0] + prob * (p[1] - p[0])
        elif self.kind is Kind.EXPONENTIAL:
            out = -np.log1p(-prob) / p[0]
        else:
            out = np.where(prob < 0.5, p[0] + p[1] * np.log(2.0 * prob), p[0] - p[1] * np.log(2.0 - 2.0 * prob))
        return _out(out)

    def moments(self, lo, hi):
        """Vectorised truncated moments (m0, m1, m2) over [lo, hi]."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        p = self.params
        if self.kind is Kind.NORMAL:
            m = _affine(_normal_std_moments((lo - p[0]) / p[1], (hi - p[0]) / p[1]), p[0], p[1])
        elif self.kind is Kind.UNIFORM:
            m = _uniform_moments(lo, hi, p[0], p[1])
        elif self.kind is Kind.EXPONENTIAL:
            m = _exponential_moments(lo, hi, p[0])
        else:
            m = _affine(_laplace_std_moments((lo - p[0]) / p[1], (hi - p[0]) / p[1]), p[0], p[1])
        return tuple(np.asarray(v, dtype=float) for v in m)

    def partial_moments(self, iv: Interval) -> tuple[float, float, float]:
        m0, m1, m2 = self.moments(iv.lo, iv.hi)
        return float(m0), float(m1), float(m2)

    # ------------------------------------------------------------- summaries

    @property
    def mean(self) -> float:
        p = self.params
        if self.kind is Kind.UNIFORM:
            return 0.5 * (p[0] + p[1])
        if self.kind is Kind.EXPONENTIAL:
            return 1.0 / p[0]
        return p[0]

    @property
    def variance(self) -> float:
        p = self.params
        if self.kind is Kind.NORMAL:
            return p[1] ** 2
        if self.kind is Kind.UNIFORM:
            return (p[1] - p[0]) ** 2 / 12.0
        if self.kind is Kind.EXPONENTIAL:
            return 1.0 / p[0] ** 2
        return 2.0 * p[1] ** 2

    @property
    def second_moment(self) -> float:
        return self.variance + self.mean**2

    def lr_median(self, r: int) -> float:
        """L^r-median: the mean for r=2, the median for r=1."""
        if r == 2:
            return self.mean
        if r == 1:
            return self.quantile(0.5)
        raise DomainError(f"L^r-median only available for r in {{1, 2}}, got {r}")

    @property
    def is_symmetric(self) -> bool:
        return self.kind in (Kind.NORMAL, Kind.LAPLACE, Kind.UNIFORM)


def parse_distribution(spec: str) -> Distribution1D:
    """Parse ``normal:mu,sigma``, ``uniform:lo,hi``, ``exp:lambda`` or ``laplace:mu,b``."""
    name, _, args = spec.strip().partition(":")
    try:
        kind = Kind(name.lower())
    except ValueError:
        raise DomainError(f"unknown distribution '{name}' in '{spec}'") from None
    try:
        params = tuple(float(a) for a in args.split(",")) if args.strip() else ()
    except ValueError:
        raise DomainError(f"non-numeric parameter in '{spec}'") from None
    return Distribution1D(kind, params)
