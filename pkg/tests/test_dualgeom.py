import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polysieve import dualgeom
from polysieve.algebra import field
from polysieve.dualgeom import BadReductionError, classify_mod_p
from polysieve.fixtures import fixture
from polysieve.structured import unweighted_form
from polysieve.verify import load_expected

EXPECTED = load_expected()
nonzero_u = st.lists(st.integers(-50, 50), min_size=3, max_size=3).filter(any)
good_primes = st.sampled_from([3, 5, 7, 11, 13])


def brute_tangent_over_fp(F, u, p):
    """Some F_p-point of H0 = <X,u> = 0 where [grad H0 | (0,u)] has rank <= 1."""
    for pt in itertools.product(range(p), repeat=F.n + 1):
        if next((c for c in pt if c), None) != 1:
            continue
        if dualgeom.jacobian_rank_at_most_one(F, u, pt, p, 1):
            return pt
    return None


def test_tangency_polys_shape():
    F = fixture("F_A")
    polys = dualgeom.tangency_polys(F, [1, 2, 3])
    assert len(polys) == F.n + 2
    assert polys[0] == unweighted_form(F)
    with pytest.raises(ValueError):
        dualgeom.tangency_polys(F, [0, 0, 0])


@pytest.mark.parametrize("name", ["F_A", "F_D"])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_quadric_classification_matches_enumeration(name, p):
    """The tangency point of a smooth quadric is unique, hence rational: k = 1 decides."""
    F = fixture(name)
    for u in itertools.product(range(p), repeat=F.n):
        if not any(u) or dualgeom.normalize_mod_p(u, p) != u:
            continue
        assert classify_mod_p(F, u, p).is_bad == (brute_tangent_over_fp(F, u, p) is not None)


@pytest.mark.parametrize("p", [3, 5])
def test_quartic_rational_tangency_is_found(p):
    F = fixture("F_C")
    for u in itertools.product(range(p), repeat=F.n):
        if not any(u) or dualgeom.normalize_mod_p(u, p) != u:
            continue
        if brute_tangent_over_fp(F, u, p) is not None:
            assert classify_mod_p(F, u, p).is_bad


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["F_A", "F_C", "F_D"]), good_primes, nonzero_u, st.integers(1, 100))
def test_classification_is_scaling_invariant(name, p, u, s):
    F = fixture(name)
    if s % p == 0 or all(c % p == 0 for c in u):
        return
    a = classify_mod_p(F, u, p).kind
    assert classify_mod_p(F, [s * c for c in u], p).kind == a


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["F_A", "F_C", "F_D"]), good_primes, nonzero_u)
def test_witness_zeroes_tangency_polys(name, p, u):
    F = fixture(name)
    c = classify_mod_p(F, u, p)
    if c.is_bad:
        w = c.witness
        assert dualgeom.witness_zeroes_tangency_polys(F, w)
        assert dualgeom.jacobian_rank_at_most_one(F, w.u, w.point, w.p, w.k)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["F_A", "F_D"]), st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23]), nonzero_u)
def test_dual_biconditional(name, p, u):
    F = fixture(name)
    if all(c % p == 0 for c in u):
        return
    G = dualgeom.quadric_dual(F)
    assert classify_mod_p(F, u, p).is_bad == (dualgeom.dual_at_zero(G, u) % p == 0)


def test_type_zero():
    assert classify_mod_p(fixture("F_A"), [5, 10, 15], 5).is_zero


def test_classification_refuses_p2_and_bad_reduction():
    with pytest.raises(ValueError):
        classify_mod_p(fixture("F_A"), [1, 0, 0], 2)
    with pytest.raises(BadReductionError):
        classify_mod_p(fixture("F_B"), [1, 0, 0], 3)


def test_quadric_duals():
    assert str(dualgeom.quadric_dual(fixture("F_A"))) == "UY^2 - U1^2 - U2^2 - U3^2"
    assert str(dualgeom.quadric_dual(fixture("F_D"))) == "UY^2 - U1^2 - U2^2 + U3^2"
    with pytest.raises(ValueError):
        dualgeom.quadric_dual(fixture("F_C"))


def test_dual_degree():
    assert dualgeom.dual_degree(2, 1, 1, 3) == 2
    assert dualgeom.dual_degree(2, 1, 2, 3) == 4 * 3**2


@pytest.mark.parametrize("u", list(EXPECTED["bad_prime_census_F_A"]))
def test_bad_prime_census_stored(u):
    import json
    assert dualgeom.bad_prime_census(fixture("F_A"), json.loads(u), 50) == EXPECTED["bad_prime_census_F_A"][u]


def test_census_counts_dual_cone_points():
    """With enough probes the census is the number of u in the box with G(0, u) = 0."""
    F = fixture("F_D")
    R = 12
    G = dualgeom.quadric_dual(F)
    want = sum(dualgeom.dual_at_zero(G, u) == 0 for u in itertools.product(range(-R, R + 1), repeat=3))
    assert dualgeom.bad_locus_census(F, R, dualgeom.census_probes(F, R)) == want


def test_census_is_monotone_in_R():
    F = fixture("F_D")
    probes = dualgeom.census_probes(F, 30)
    counts = [dualgeom.bad_locus_census(F, R, probes) for R in range(0, 31, 5)]
    assert counts == sorted(counts)


def test_census_argument_checks():
    F = fixture("F_A")
    with pytest.raises(ValueError):
        dualgeom.bad_locus_census(F, 5, [3, 5])
    with pytest.raises(ValueError):
        dualgeom.bad_locus_census(F, 5, [3, 5, 5])
    with pytest.raises(BadReductionError):
        dualgeom.bad_locus_census(fixture("F_B"), 5, [3, 5, 7])


def test_envelope_exponent():
    assert dualgeom.census_envelope_exponent(3) == pytest.approx(4 / 3)
    with pytest.raises(ValueError):
        dualgeom.census_envelope_exponent(2)
