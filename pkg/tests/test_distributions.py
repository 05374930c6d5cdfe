"""Closed-form kernels of the one-dimensional laws."""
import math

import numpy as np
import pytest
from scipy import integrate

from greedyq.distributions import Distribution1D, Interval, parse_distribution
from greedyq.errors import DomainError


def _random_interval(rng, dist):
    lo, hi = dist.effective_support(1e-6)
    a, b = np.sort(rng.uniform(lo, hi, size=2))
    return float(a), float(b)


def test_cdf_examples():
    """Closed-form CDF values at symmetric and median points"""
    assert Distribution1D.normal().cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert Distribution1D.uniform().cdf(0.25) == pytest.approx(0.25)
    assert Distribution1D.exponential(1.0).cdf(math.log(2.0)) == pytest.approx(0.5, abs=1e-15)
    assert Distribution1D.laplace().cdf(0.0) == pytest.approx(0.5)


def test_cdf_limits_and_monotonicity(law):
    xs = np.linspace(-30.0, 30.0, 2001)
    values = np.asarray(law.cdf(xs))
    assert np.all(np.diff(values) >= 0.0)
    assert law.cdf(-math.inf) == 0.0
    assert law.cdf(math.inf) == 1.0


def test_quantile_examples():
    assert Distribution1D.uniform().quantile(0.3) == pytest.approx(0.3)
    assert Distribution1D.exponential(1.0).quantile(1.0 - math.exp(-2.0)) == pytest.approx(2.0, rel=1e-12)
    assert Distribution1D.normal().quantile(0.975) == pytest.approx(1.959964, abs=1e-6)


def test_quantile_inverts_cdf(law):
    probs = np.linspace(1e-3, 1.0 - 1e-3, 501)
    xs = np.asarray(law.quantile(probs))
    assert np.asarray(law.cdf(xs)) == pytest.approx(probs, abs=1e-12)
    assert np.asarray(law.quantile(law.cdf(xs))) == pytest.approx(xs, abs=1e-10)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_quantile_rejects_probabilities_outside_unit_interval(p):
    with pytest.raises(DomainError):
        Distribution1D.normal().quantile(p)


def test_partial_moment_examples():
    test_cases = [
        {"dist": Distribution1D.uniform(), "iv": Interval(0.0, 1.0), "expected": (1.0, 0.5, 1.0 / 3.0)},
        {"dist": Distribution1D.exponential(1.0), "iv": Interval(0.0, math.inf), "expected": (1.0, 1.0, 2.0)},
        {"dist": Distribution1D.normal(), "iv": Interval(0.0, math.inf),
         "expected": (0.5, 1.0 / math.sqrt(2.0 * math.pi), 0.5)},
        {"dist": Distribution1D.laplace(), "iv": Interval(), "expected": (1.0, 0.0, 2.0)},
    ]
    for case in test_cases:
        assert case["dist"].partial_moments(case["iv"]) == pytest.approx(case["expected"], abs=1e-12)


def test_full_support_moments_match_mean_and_second_moment(law):
    lo, hi = law.support()
    m0, m1, m2 = law.partial_moments(Interval(lo, hi))
    assert (m0, m1, m2) == pytest.approx((1.0, law.mean, law.second_moment), abs=1e-10)


def test_moments_are_additive_over_partitions(law):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a, b = _random_interval(rng, law)
        cuts = np.sort(np.concatenate(([a, b], rng.uniform(a, b, size=3))))
        whole = np.asarray(law.partial_moments(Interval(a, b)))
        pieces = np.asarray(law.moments(cuts[:-1], cuts[1:])).sum(axis=1)
        assert pieces == pytest.approx(whole, abs=1e-12)


def test_mass_matches_cdf_difference(law):
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = _random_interval(rng, law)
        assert law.partial_moments(Interval(a, b))[0] == pytest.approx(law.cdf(b) - law.cdf(a), abs=1e-14)


def test_moments_match_quadrature(law):
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b = _random_interval(rng, law)
        closed = law.partial_moments(Interval(a, b))
        for k in range(3):
            oracle, _ = integrate.quad(lambda t: t**k * law.pdf(t), a, b, epsabs=1e-13, epsrel=1e-12,
                                       points=(law.breakpoints or None) if a < 0.0 < b else None)
            assert closed[k] == pytest.approx(oracle, abs=1e-9)


def test_lr_median():
    assert Distribution1D.normal().lr_median(2) == 0.0
    assert Distribution1D.uniform().lr_median(2) == 0.5
    assert Distribution1D.exponential(1.0).lr_median(1) == pytest.approx(math.log(2.0))
    with pytest.raises(DomainError):
        Distribution1D.normal().lr_median(3)


def test_parse_distribution_round_trips_canonical_spec():
    for text in ["normal:0,1", "uniform:-1,2", "exp:0.5", "laplace:0,1"]:
        dist = parse_distribution(text)
        assert parse_distribution(dist.spec) == dist


@pytest.mark.parametrize("text", ["gamma:1,2", "normal:0", "normal:0,-1", "uniform:1,0", "exp:x"])
def test_parse_distribution_rejects_bad_specs(text):
    with pytest.raises(DomainError):
        parse_distribution(text)


def test_interval_rejects_reversed_bounds():
    with pytest.raises(DomainError):
        Interval(1.0, 0.0)
