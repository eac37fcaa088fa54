import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polysieve import counting
from polysieve.algebra import SparsePoly, field
from polysieve.fixtures import fixture
from polysieve.verify import load_expected
from polysieve.weights import SmoothWeightSpec

EXPECTED = load_expected()


@pytest.mark.parametrize("name", ["F_A", "F_C", "F_D"])
def test_count_N_stored_values(name):
    for B, want in EXPECTED["count_N"][name].items():
        assert counting.count_N(fixture(name), int(B)) == want


@pytest.mark.parametrize("name", ["F_A", "F_B", "F_C", "F_D"])
def test_divisor_search_matches_scan(name):
    F = fixture(name)
    for B in range(4):
        assert counting.count_N(F, B) == counting.count_N_scan(F, B)


def test_integer_solutions_satisfy_F():
    F = fixture("F_A")
    P = F.polynomial()
    sols = counting.integer_solutions(F, 3)
    assert len({x for _, x in sols}) == counting.count_N(F, 3)
    assert all(P.eval_int((y,) + tuple(x)) == 0 for y, x in sols)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4))
def test_integer_roots_of_products(roots):
    coeffs = [1]
    for r in roots:
        coeffs = [a - r * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    assert counting.integer_roots(coeffs) == sorted(set(roots))


@pytest.mark.parametrize("name", ["F_A", "F_B", "F_C"])
@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_nu_grid_fast_matches_scalar_and_bounded(name, p):
    F = fixture(name)
    fast = counting.nu_grid(F, p)
    assert np.array_equal(fast, counting.nu_grid_scalar(F, p))
    assert fast.max() <= F.D


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["F_A", "F_C", "F_D"]), st.sampled_from([3, 5, 7, 11, 13]),
       st.lists(st.integers(-100, 100), min_size=3, max_size=3))
def test_nu_p_scalar_matches_grid(name, p, k):
    F = fixture(name)
    assert counting.nu_p(F, k, p) == counting.nu_grid(F, p)[tuple(c % p for c in k)]


def test_indicator_weight_gives_N():
    F = fixture("F_A")
    for B in (2, 5):
        assert counting.count_S(F, B, SmoothWeightSpec(B, "indicator")) == counting.count_N(F, B)


@pytest.mark.parametrize("B", [3, 6, 8])
def test_smoothed_count_dominates(B):
    for name in ("F_A", "F_C", "F_D"):
        F = fixture(name)
        assert counting.count_N(F, B) <= counting.count_S(F, B, SmoothWeightSpec(B))


def test_schwartz_zippel_count():
    x1, x2 = SparsePoly.gens(["X1", "X2"])
    assert counting.schwartz_zippel_count(x1 * x2, 3) == 13
    with pytest.raises(ValueError):
        counting.schwartz_zippel_count(SparsePoly(["X1"], {}), 3)


def test_projective_conic_has_p_plus_one_points():
    z, x, y = SparsePoly.gens(["Z", "X", "Y"])
    for p in (3, 5, 7):
        assert len(counting.projective_points([x * y - z**2], field(p))) == p + 1


def test_omega():
    assert counting.omega(60) == 3 and counting.omega(-7) == 1 and counting.omega(1) == 0
    with pytest.raises(ValueError):
        counting.omega(0)


def test_box_validation():
    with pytest.raises(ValueError):
        counting.BoxSpec(-1, 3)
