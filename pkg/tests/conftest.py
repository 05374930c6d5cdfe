"""Shared fixtures: greedy sequences are expensive, so each (law, n) is built once per session."""
from functools import lru_cache

import pytest

from greedyq.distributions import Distribution1D, parse_distribution
from greedyq.greedy1d import build, truncate

LAWS = ["normal:0,1", "uniform:0,1", "exp:1", "laplace:0,1"]


@lru_cache(maxsize=None)
def _longest(spec: str, n: int):
    return build(parse_distribution(spec), n)


_BUILT: dict[str, int] = {}


def built_sequence(spec: str, n: int):
    """Greedy sequence of ``spec`` at level n, reusing any longer build."""
    longest = _BUILT.get(spec, 0)
    if n > longest:
        _BUILT[spec] = n
        return _longest(spec, n)
    return truncate(_longest(spec, longest), n)


@pytest.fixture(scope="session")
def built():
    return built_sequence


@pytest.fixture(params=LAWS)
def law(request) -> Distribution1D:
    return parse_distribution(request.param)
