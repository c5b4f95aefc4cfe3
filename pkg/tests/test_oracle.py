from fractions import Fraction

import pytest

from ntowns.geometry import CITY, TOWN, Town, canonical_form, cost, is_orthogonally_convex
from ntowns.oracle import (
    EXHAUSTIVE,
    PROFILE,
    brute_force_optimum,
    enumerate_profiles,
    greedy_shape,
    greedy_upper_bound,
    size_bound,
)


def test_profiles_n1():
    assert list(enumerate_profiles(1)) == [Town([(0, 0)])]


def test_profiles_n2():
    towns = list(enumerate_profiles(2))
    assert len(towns) == 2
    assert {canonical_form(t) for t in towns} == {canonical_form(Town([(0, 0), (1, 0)]))}


def test_profiles_n4_cover_exhaustive_optima():
    shapes = {canonical_form(t) for t in enumerate_profiles(4)}
    assert canonical_form(Town([(0, 0), (1, 0), (0, 1), (1, 1)])) in shapes
    assert canonical_form(Town([(i, 0) for i in range(4)])) in shapes
    ex = brute_force_optimum(4, TOWN, EXHAUSTIVE)
    assert set(ex.shapes) <= shapes


def test_profiles_reject_bad_input():
    with pytest.raises(ValueError):
        list(enumerate_profiles(0))
    with pytest.raises(ValueError):
        list(enumerate_profiles(9, bound=3))


@pytest.mark.parametrize("n", range(1, 11))
def test_profile_towns_rows_and_columns_contiguous(n):
    for t in enumerate_profiles(n):
        assert t.n == n
        assert is_orthogonally_convex(t)


@pytest.mark.parametrize(
    "n, objective, cost3, mult",
    [
        (1, TOWN, 0, 1),
        (1, CITY, 1, 1),
        (3, TOWN, 12, 2),
        (8, TOWN, 162, 2),
        (11, TOWN, 372, 4),
        (11, CITY, 407, 2),
    ],
)
def test_profile_optimum_matches_table(n, objective, cost3, mult):
    res = brute_force_optimum(n, objective, PROFILE)
    assert res.cost == Fraction(cost3, 3)
    assert res.multiplicity == mult
    for shape in res.shapes:
        assert shape.n == n and cost(shape, objective) == res.cost
        assert canonical_form(shape) == shape


@pytest.mark.parametrize("objective", [TOWN, CITY])
@pytest.mark.parametrize("n", range(1, 7))
def test_exhaustive_equals_profile(n, objective):
    ex = brute_force_optimum(n, objective, EXHAUSTIVE)
    pr = brute_force_optimum(n, objective, PROFILE)
    assert ex.cost == pr.cost
    assert ex.shapes == pr.shapes


def test_level_ranges():
    with pytest.raises(ValueError):
        brute_force_optimum(7, TOWN, EXHAUSTIVE)
    with pytest.raises(ValueError):
        brute_force_optimum(0, TOWN, PROFILE)
    with pytest.raises(ValueError):
        brute_force_optimum(3, "suburb", PROFILE)


def test_greedy_examples():
    assert greedy_upper_bound(1)[0] == 0
    assert greedy_upper_bound(4)[0] >= 8
    assert greedy_upper_bound(10)[0] >= 96


def test_greedy_shape_is_deterministic_and_centered():
    assert greedy_shape(5) == Town([(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)])
    assert greedy_shape(9) == Town((x, y) for x in (-1, 0, 1) for y in (-1, 0, 1))


@pytest.mark.parametrize("objective", [TOWN, CITY])
@pytest.mark.parametrize("n", range(1, 17))
def test_greedy_bounds_oracle(n, objective):
    assert greedy_upper_bound(n, objective)[0] >= brute_force_optimum(n, objective, PROFILE).cost


def test_size_bound():
    assert size_bound(1) == 7
    assert size_bound(16) == 13
