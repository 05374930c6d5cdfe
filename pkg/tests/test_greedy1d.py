"""Greedy sequence construction and its incremental ledgers."""
import math

import numpy as np
import pytest
from scipy import integrate

from greedyq.distributions import Distribution1D, parse_distribution
from greedyq.greedy1d import (
    build,
    error_lr,
    error_lr_trace,
    gap_inertia,
    init,
    insert_next,
    local_candidate,
    recompute_full,
    sequence_from_points,
    truncate,
)

from conftest import LAWS

NORMAL = Distribution1D.normal()
UNIFORM = Distribution1D.uniform()


def _normal_two_point_error(a: float) -> float:
    """E[min(X^2, (X - a)^2)] for X ~ N(0,1), by quadrature."""
    value, _ = integrate.quad(lambda x: min(x * x, (x - a) ** 2) * NORMAL.pdf(x), -np.inf, np.inf, limit=200)
    return value


def test_init_examples():
    test_cases = [
        {"dist": NORMAL, "a1": 0.0, "e2": 1.0},
        {"dist": UNIFORM, "a1": 0.5, "e2": 1.0 / 12.0},
        {"dist": Distribution1D.exponential(1.0), "a1": 1.0, "e2": 1.0},
    ]
    for case in test_cases:
        seq = init(case["dist"])
        assert seq.points == (case["a1"],)
        assert seq.error_sq_trace == pytest.approx((case["e2"],))
        assert seq.weights == (1.0,)
        assert math.fsum(seq.inertias) == pytest.approx(case["e2"], abs=1e-10)


def test_local_candidate_uniform_boundary_gap():
    """Inside (0, 1/2) with only a right neighbour the optimum is a/3 and the gain 8a^3/27"""
    candidate = local_candidate(UNIFORM, -math.inf, 0.5)
    assert candidate.x == pytest.approx(1.0 / 6.0, abs=1e-10)
    assert candidate.gain == pytest.approx(8.0 / 27.0 * 0.125, rel=1e-10)

    before, _ = integrate.quad(lambda t: (t - 0.5) ** 2, 0.0, 0.5)
    after, _ = integrate.quad(lambda t: min((t - candidate.x) ** 2, (t - 0.5) ** 2), 0.0, 0.5, points=[1.0 / 3.0])
    assert candidate.gain == pytest.approx(before - after, rel=1e-9)


def test_local_candidate_mirror_gap():
    left = local_candidate(UNIFORM, -math.inf, 0.5)
    right = local_candidate(UNIFORM, 0.5, math.inf)
    assert right.x == pytest.approx(5.0 / 6.0, abs=1e-10)
    assert right.gain == pytest.approx(left.gain, rel=1e-12)


def test_local_candidate_is_a_lloyd_fixed_point():
    candidate = local_candidate(NORMAL, 0.0, math.inf)
    assert candidate.x > 0.0
    m0, m1, _ = NORMAL.moments(0.5 * candidate.x, math.inf)
    assert float(m1 / m0) == pytest.approx(candidate.x, abs=1e-10)


def test_local_candidate_zero_mass_gap():
    candidate = local_candidate(UNIFORM, 2.0, 3.0)
    assert candidate.gain == 0.0
    assert candidate.x == pytest.approx(2.5)


def test_normal_second_point_matches_brute_force():
    seq = insert_next(init(NORMAL))
    a2 = seq.points[1]
    assert abs(a2) == pytest.approx(1.2247, abs=1e-3)
    grid = np.arange(0.5, 2.0, 1e-3)
    oracle = grid[int(np.argmin([_normal_two_point_error(a) for a in grid]))]
    assert abs(a2) == pytest.approx(oracle, abs=2e-3)
    assert seq.error_sq_trace[0] - seq.error_sq_trace[1] == pytest.approx(1.0 - _normal_two_point_error(a2), abs=1e-8)
    # a_2 is the conditional mean of its own cell
    lo, hi = (-math.inf, 0.5 * a2) if a2 < 0 else (0.5 * a2, math.inf)
    m0, m1, _ = NORMAL.moments(lo, hi)
    assert float(m1 / m0) == pytest.approx(a2, abs=1e-10)


def test_normal_third_point_mirrors_second():
    seq = build(NORMAL, 3)
    assert seq.points[2] == pytest.approx(-seq.points[1], abs=1e-9)
    assert seq.weights[0] == pytest.approx(seq.weights[2], abs=1e-12)


def test_uniform_second_point_goes_left_on_ties():
    seq = insert_next(init(UNIFORM))
    assert seq.points[1] == pytest.approx(1.0 / 6.0, abs=1e-10)


def test_build_examples():
    assert build(UNIFORM, 1).points == (0.5,)
    exp_seq = build(Distribution1D.exponential(1.0), 50)
    assert exp_seq.error_sq_trace[49] < exp_seq.error_sq_trace[48]


@pytest.mark.parametrize("spec", LAWS)
def test_incremental_ledgers_match_recomputation_every_step(spec):
    dist = parse_distribution(spec)
    seq = init(dist)
    for _ in range(150):
        seq = insert_next(seq)
        inertias, weights = recompute_full(seq)
        assert np.asarray(seq.inertias) == pytest.approx(np.asarray(inertias), abs=1e-12)
        assert np.asarray(seq.weights) == pytest.approx(np.asarray(weights), abs=1e-12)


@pytest.mark.parametrize("spec", LAWS)
def test_sequence_invariants_at_1000(built, spec):
    """Ledger equivalence, monotone error, hull, distinct points and gain consistency"""
    seq = built(spec, 1000)
    dist = seq.dist

    inertias, weights = recompute_full(seq)
    assert np.asarray(seq.inertias) == pytest.approx(np.asarray(inertias), abs=1e-12)
    assert np.asarray(seq.weights) == pytest.approx(np.asarray(weights), abs=1e-12)

    assert math.fsum(seq.weights) == pytest.approx(1.0, abs=1e-12)
    assert math.fsum(seq.inertias) == pytest.approx(seq.error_sq_trace[-1], abs=1e-10)
    trace = np.asarray(seq.error_sq_trace)
    assert np.all(np.diff(trace) < 0.0)

    lo, hi = dist.effective_support()
    assert lo <= min(seq.points) and max(seq.points) <= hi
    assert len(set(seq.points)) == seq.n
    assert list(seq.sorted_points) == sorted(seq.points)

    gains = np.asarray([s.gain for s in seq.steps])
    assert -np.diff(trace) == pytest.approx(gains, abs=1e-12)
    for step in seq.steps:
        assert step.p_minus >= 0.0 and step.p_plus >= 0.0
        assert step.p_minus + step.p_plus <= 1.0


def test_open_end_candidate_stays_in_effective_support():
    dist = Distribution1D.exponential(1.0)
    lo, hi = dist.effective_support()
    cand = local_candidate(dist, 20.0, math.inf)
    assert 20.0 < cand.x <= hi
    assert local_candidate(dist, hi, math.inf).gain == 0.0


@pytest.mark.parametrize("spec", ["exp:1", "laplace:0,1"])
def test_unbounded_laws_keep_points_inside_effective_support(built, spec):
    seq = built(spec, 1000)
    lo, hi = seq.dist.effective_support()
    assert lo <= min(seq.points)
    assert max(seq.points) <= hi
    assert len(set(seq.points)) == seq.n


@pytest.mark.parametrize("spec", ["normal:0,1", "laplace:0,1"])
def test_symmetric_laws_give_symmetric_odd_levels(built, spec):
    seq = built(spec, 101)
    for n in range(1, 102, 2):
        pts = np.asarray(truncate(seq, n).sorted_points)
        assert pts == pytest.approx(-pts[::-1], abs=1e-8)


def test_error_lr_examples(built):
    assert error_lr(init(NORMAL), 2) == pytest.approx(1.0)
    assert error_lr(init(UNIFORM), 1) == pytest.approx(0.25, abs=1e-12)
    seq = built("normal:0,1", 255)
    assert error_lr(seq, 2, method="quadrature") == pytest.approx(math.sqrt(math.fsum(seq.inertias)), abs=1e-8)


def test_error_lr_trace_replays_quadratic_ledger(built):
    seq = built("exp:1", 200)
    by_quadrature = error_lr_trace(seq, 2, method="quadrature")
    assert by_quadrature == pytest.approx(np.sqrt(np.asarray(seq.error_sq_trace)), rel=1e-8)
    assert error_lr_trace(seq, 1.5)[-1] == pytest.approx(error_lr(seq, 1.5), rel=1e-12)


def test_gap_inertia_against_quadrature():
    left, right = -0.3, 0.9
    oracle, _ = integrate.quad(lambda t: min((t - left) ** 2, (t - right) ** 2) * NORMAL.pdf(t), left, right,
                               points=[0.3])
    assert float(gap_inertia(NORMAL, left, right)) == pytest.approx(oracle, rel=1e-10)
    tail, _ = integrate.quad(lambda t: (t - right) ** 2 * NORMAL.pdf(t), right, np.inf)
    assert float(gap_inertia(NORMAL, right, math.inf)) == pytest.approx(tail, rel=1e-10)


def test_recompute_full_examples(built):
    assert recompute_full(init(UNIFORM))[1] == (1.0,)
    weights = recompute_full(built("normal:0,1", 3))[1]
    assert weights[0] == pytest.approx(weights[2], abs=1e-12)


def test_replay_from_points_rebuilds_ledgers(built):
    seq = built("laplace:0,1", 120)
    replayed = sequence_from_points(seq.dist, seq.points)
    assert replayed.sorted_points == seq.sorted_points
    assert np.asarray(replayed.weights) == pytest.approx(np.asarray(seq.weights), abs=1e-12)
    assert np.asarray(replayed.error_sq_trace) == pytest.approx(np.asarray(seq.error_sq_trace), abs=1e-12)
    assert [s.i0 for s in replayed.steps] == [s.i0 for s in seq.steps]
    assert [s.p_minus for s in replayed.steps] == pytest.approx([s.p_minus for s in seq.steps], abs=1e-14)


def test_truncated_prefix_continues_like_the_original(built):
    seq = built("uniform:0,1", 60)
    prefix = truncate(seq, 40)
    assert prefix.n == 40
    assert insert_next(prefix).points[-1] == pytest.approx(seq.points[40], abs=1e-12)
