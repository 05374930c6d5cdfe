"""Full and recursive quantization-based cubature in one dimension."""
import math

import numpy as np
import pytest

from greedyq.cubature import (
    CubatureState,
    advance,
    get_integrand,
    integrate_full,
    integrate_stream,
    reference_integral,
    start,
)
from greedyq.distributions import Distribution1D
from greedyq.errors import DomainError
from greedyq.greedy1d import build, error_lr_trace, truncate

from conftest import LAWS

FUNCTIONS = ["one", "x", "x2", "abs", "sin"]


def test_integrate_full_examples(built):
    assert integrate_full(built("exp:1", 37), get_integrand("one")) == pytest.approx(1.0, abs=1e-12)
    assert integrate_full(built("normal:0,1", 3), get_integrand("x")) == pytest.approx(0.0, abs=1e-12)
    assert integrate_full(built("uniform:0,1", 1000), get_integrand("x2")) == pytest.approx(1.0 / 3.0, abs=1e-3)


def test_advance_keeps_constants(built):
    seq = built("normal:0,1", 50)
    state = start(seq, get_integrand("one"))
    for step in seq.steps:
        state = advance(state, step, seq, get_integrand("one"))
        assert state.value == pytest.approx(1.0, abs=1e-12 * state.n)


def test_advance_first_uniform_step_matches_two_term_sum(built):
    seq = built("uniform:0,1", 2)
    f = get_integrand("x")
    state = advance(start(seq, f), seq.steps[0], seq, f)
    direct = sum(w * x for w, x in zip(seq.weights, seq.sorted_points))
    assert state.value == pytest.approx(direct, abs=1e-14)


def test_advance_rejects_out_of_order_steps(built):
    seq = built("uniform:0,1", 5)
    with pytest.raises(DomainError):
        advance(CubatureState(n=1, value=0.5), seq.steps[2], seq, get_integrand("x"))


def test_recursive_normal_square_matches_full_each_step(built):
    seq = built("normal:0,1", 500)
    f = get_integrand("x2")
    trace = integrate_stream(seq.dist, f, 500, seq=seq)
    for n in range(1, 501, 7):
        full = integrate_full(truncate(seq, n), f)
        assert trace[n - 1] == pytest.approx(full, rel=1e-10)


@pytest.mark.parametrize("spec", LAWS)
@pytest.mark.parametrize("name", FUNCTIONS)
def test_recursive_matches_full_cubature(built, spec, name):
    seq = built(spec, 1000)
    f = get_integrand(name)
    trace = integrate_stream(seq.dist, f, seq.n, seq=seq)
    for n in range(1, seq.n + 1):
        full = integrate_full(truncate(seq, n), f)
        assert abs(trace[n - 1] - full) <= 1e-10 * (1.0 + abs(full))


@pytest.mark.slow
@pytest.mark.parametrize("spec", LAWS)
def test_recursive_matches_full_cubature_up_to_2000(built, spec):
    seq = built(spec, 2000)
    integrands = [get_integrand(name) for name in FUNCTIONS]
    traces = [integrate_stream(seq.dist, f, seq.n, seq=seq) for f in integrands]
    for n in range(1, seq.n + 1):
        prefix = truncate(seq, n)
        for f, trace in zip(integrands, traces):
            full = integrate_full(prefix, f)
            assert abs(trace[n - 1] - full) <= 1e-10 * (1.0 + abs(full))


def test_integrate_stream_examples(built):
    assert integrate_stream(Distribution1D.uniform(), get_integrand("one"), 10) == pytest.approx([1.0] * 10, abs=1e-12)
    uniform = built("uniform:0,1", 100)
    assert abs(integrate_stream(uniform.dist, get_integrand("x"), 100, seq=uniform)[-1] - 0.5) <= 0.01
    exp_seq = built("exp:1", 500)
    assert abs(integrate_stream(exp_seq.dist, get_integrand("expneg"), 500, seq=exp_seq)[-1] - 0.5) <= 0.01


@pytest.mark.parametrize("spec", LAWS)
def test_lipschitz_bound_for_absolute_value(built, spec):
    seq = built(spec, 300)
    f = get_integrand("abs")
    exact = reference_integral(seq.dist, f)
    e1 = error_lr_trace(seq, 1.0)
    trace = integrate_stream(seq.dist, f, seq.n, seq=seq)
    for n in [1, 5, 20, 100, 300]:
        assert abs(trace[n - 1] - exact) <= e1[n - 1] + 1e-10


def test_reference_integral_known_values():
    assert reference_integral(Distribution1D.normal(), get_integrand("abs")) == pytest.approx(math.sqrt(2 / math.pi))
    assert reference_integral(Distribution1D.exponential(1.0), get_integrand("expneg")) == pytest.approx(0.5)
    assert reference_integral(Distribution1D.laplace(), get_integrand("x2")) == pytest.approx(2.0)


def test_unknown_integrand_is_rejected():
    with pytest.raises(DomainError):
        get_integrand("tan")
