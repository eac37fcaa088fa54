import math

import pytest

from polysieve import sieve
from polysieve.fixtures import fixture
from polysieve.verify import load_expected
from polysieve.weights import SmoothWeightSpec

EXPECTED = load_expected()


def test_sieving_sets():
    A = fixture("F_A")
    assert list(sieve.build_sieving_set(A, 11, 2).primes) == EXPECTED["sieving_set_F_A_Q11"]
    assert sieve.build_sieving_set(A, 11, 4).primes == (13, 17)
    with pytest.raises(ValueError):
        sieve.build_sieving_set(A, 2)


def test_sieving_set_excludes_bad_primes():
    assert 3 not in sieve.build_sieving_set(fixture("F_B"), 3, 2).primes


def test_choose_Q():
    assert sieve.choose_Q(10000, 3) == pytest.approx(1742.083, abs=1e-3)
    with pytest.raises(ValueError):
        sieve.choose_Q(2, 3)


def test_parameters_validation():
    with pytest.raises(ValueError):
        sieve.SieveParameters(Q=11, kappa=0.8)
    with pytest.raises(ValueError):
        sieve.SieveParameters(kappa=0.5, paper_mode=True)
    with pytest.raises(ValueError):
        sieve.SieveParameters(alpha=1.5)


def test_T_direct_stored_value():
    d = sieve.T_direct(fixture("F_A"), 5, 13, SmoothWeightSpec(10))
    assert d == pytest.approx(EXPECTED["T_direct_F_A_5_13_B10"], abs=1e-9)
    with pytest.raises(ValueError):
        sieve.T_direct(fixture("F_A"), 5, 5, SmoothWeightSpec(10))


@pytest.mark.parametrize("name,p,q,B", [("F_A", 3, 5, 6), ("F_C", 5, 7, 6), ("F_D", 3, 7, 5)])
def test_poisson_identity_small(name, p, q, B):
    F = fixture(name)
    w = SmoothWeightSpec(B)
    trunc = sieve.trunc_for_tail(F, p, q, w, 0.1)
    r = sieve.T_poisson(F, p, q, w, trunc, by_type=True)
    direct = sieve.T_direct(F, p, q, w)
    assert r.tail_bound < 0.1
    assert abs(r.value - direct) <= r.tail_bound + r.err_budget
    assert abs(r.imag) <= r.tail_bound + r.err_budget
    assert math.fsum(r.by_type.values()) == pytest.approx(r.value, abs=1e-8 * max(1, abs(r.value)))


def test_tail_bound_decreases_with_truncation():
    F, w = fixture("F_A"), SmoothWeightSpec(6)
    tails = [sieve.T_poisson(F, 3, 5, w, t).tail_bound for t in (5, 10, 20, 40)]
    assert tails == sorted(tails, reverse=True)


def test_per_k_inequality_holds():
    F = fixture("F_A")
    res = sieve.per_k_inequality(F, 6, [11, 13, 17, 19])
    assert res["checked"] > 0 and res["violations"] == 0


def test_desk_report_is_thread_independent():
    F = fixture("F_A")
    params = sieve.SieveParameters(Q=11)
    one = sieve.sieve_bound(F, 6, params, poisson=False).to_dict()
    two = sieve.sieve_bound(F, 6, params, poisson=False, threads=2).to_dict()
    assert one == two and one["all_pass"]
    assert one["N"] <= one["S"]


def test_desk_report_with_poisson():
    rep = sieve.sieve_bound(fixture("F_A"), 4, sieve.SieveParameters(Q=5))
    assert rep.all_pass
    assert all(row["poisson_ok"] for row in rep.pairs)


def test_paper_mode_reports_sizes_only():
    rep = sieve.sieve_bound(fixture("F_A"), 10**4, sieve.SieveParameters(paper_mode=True))
    d = rep.to_dict()
    assert d["mode"] == "paper" and d["N"] is None
    assert d["Q"] == pytest.approx(sieve.choose_Q(10**4, 3))


def test_singular_instance_refused():
    with pytest.raises(ValueError):
        sieve.sieve_bound(fixture("F_sing"), 4, sieve.SieveParameters(Q=11))
