"""Star discrepancy formulas against the critical-box oracle, and the L^1 link."""
import numpy as np
import pytest

from greedyq.discrepancy import (
    PointSet,
    quantization_error_vs_disc,
    star_disc,
    star_disc_1d,
    star_disc_2d,
    star_disc_3d,
    star_disc_bruteforce,
    uniform_l1_error,
)
from greedyq.errors import ComplexityError, DomainError
from greedyq.greedy1d import truncate
from greedyq.pricing import vdc_points

CENTERED = (2 * np.arange(1, 11) - 1) / 20


def test_one_dimensional_examples():
    assert star_disc_1d(PointSet([0.5])) == pytest.approx(0.5)
    assert star_disc_1d(PointSet(CENTERED)) == pytest.approx(1 / 20)


def test_single_point_examples_in_higher_dimensions():
    assert star_disc_2d(PointSet([[0.5, 0.5]])) == pytest.approx(0.75)
    assert star_disc_3d(PointSet([[0.5, 0.5, 0.5]])) == pytest.approx(0.875)


def test_duplicate_corner_points_match_oracle():
    ps = PointSet([[1.0, 1.0, 1.0], [1.0, 1.0, 1.0]])
    assert star_disc_3d(ps) == pytest.approx(star_disc_bruteforce(ps), abs=1e-12)


def test_lifted_set_has_an_empty_box_below_its_row():
    rng = np.random.default_rng(7)
    x = rng.random(8)
    lifted = PointSet(np.column_stack([x, np.full(8, 1 - 1e-9)]))
    value = star_disc_2d(lifted)
    assert value == pytest.approx(star_disc_bruteforce(lifted), abs=1e-12)
    assert value == pytest.approx(1 - 1e-9, abs=1e-12)
    assert value >= star_disc_1d(PointSet(x))


@pytest.mark.parametrize("d,max_n", [(1, 12), (2, 8), (3, 8)])
def test_formula_matches_oracle_on_random_sets(d, max_n):
    rng = np.random.default_rng(2024 + d)
    for _ in range(100):
        n = int(rng.integers(1, max_n + 1))
        ps = PointSet(rng.random((n, d)))
        assert star_disc(ps) == pytest.approx(star_disc_bruteforce(ps), abs=1e-12)


def test_formula_matches_oracle_with_repeated_coordinates():
    rng = np.random.default_rng(11)
    for _ in range(30):
        ps = PointSet(rng.integers(0, 4, size=(6, 2)) / 4)
        assert star_disc_2d(ps) == pytest.approx(star_disc_bruteforce(ps), abs=1e-12)


def test_oracle_single_point():
    for p in (0.1, 0.5, 0.9):
        assert star_disc_bruteforce(PointSet([p])) == pytest.approx(max(p, 1 - p))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_permutation_invariance(d):
    rng = np.random.default_rng(99)
    pts = rng.random((9, d))
    assert star_disc(PointSet(pts)) == pytest.approx(star_disc(PointSet(pts[rng.permutation(9)])), abs=1e-15)


def test_oracle_refuses_large_sets():
    with pytest.raises(ComplexityError):
        star_disc_bruteforce(PointSet(np.linspace(0, 1, 13)))


def test_point_set_validation():
    with pytest.raises(DomainError):
        PointSet([[1.5, 0.2]])
    with pytest.raises(DomainError):
        PointSet(np.zeros((3, 4)))
    with pytest.raises(DomainError):
        star_disc_2d(PointSet([0.3, 0.4]))


def test_uniform_l1_error_examples():
    assert uniform_l1_error([0.5]) == pytest.approx(0.25)
    assert uniform_l1_error(CENTERED) == pytest.approx(1 / 40)


def test_l1_error_below_discrepancy_for_greedy_uniform(built):
    seq = built("uniform:0,1", 512)
    for n in range(1, 513):
        e1, disc = quantization_error_vs_disc(truncate(seq, n))
        assert e1 <= disc + 1e-15


def test_l1_error_below_discrepancy_for_random_and_vdc_sets():
    rng = np.random.default_rng(5)
    for n in (1, 2, 5, 17, 100, 500):
        x = rng.random(n)
        assert uniform_l1_error(x) <= star_disc_1d(PointSet(x)) + 1e-15
        v = vdc_points(n)
        assert uniform_l1_error(v) <= star_disc_1d(PointSet(v)) + 1e-15


def test_link_requires_standard_uniform(built):
    with pytest.raises(DomainError):
        quantization_error_vs_disc(built("normal:0,1", 5))
