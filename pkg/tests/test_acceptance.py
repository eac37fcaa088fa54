"""The twelve acceptance criteria, each at its stated tolerance and time limit."""

import math
import random
import time

import numpy as np
import pytest
from sympy import primerange

from polysieve import coeffreduce, counting, dualgeom, expsum, sieve, structured
from polysieve.fixtures import fixture
from polysieve.weights import SmoothWeightSpec


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_exact_sieve_inequality(criterion):
    lines, ok = [], True
    with Timer() as t:
        for name in ("F_A", "F_C"):
            F = fixture(name)
            primes = sieve.build_sieving_set(F, 11, 2).primes
            for B in (8, 12):
                w = SmoothWeightSpec(B)
                N, S = counting.count_N(F, B), counting.count_S(F, B, w)
                pk = sieve.per_k_inequality(F, w.support, primes)
                ok &= N <= S and pk["violations"] == 0 and pk["checked"] > 0
                lines.append(f"{name} B={B}: N={N} S={S:.1f} per-k {pk['checked']} checked")
    ok &= t.elapsed < 60
    criterion(1, "exact sieve inequality", ok, "; ".join(lines) + f"; {t.elapsed:.1f}s")
    assert ok


def test_dft_matches_direct_sum(criterion):
    F = fixture("F_A")
    worst = 0.0
    ok = True
    with Timer() as t:
        for p in (3, 5, 7, 11, 13):
            table = expsum.g_table(F, p)
            dev = max(abs(table[u] - expsum.g_direct(F, u, p)) for u in np.ndindex(*(p,) * F.n))
            worst = max(worst, dev / p ** (F.n / 2))
            ok &= dev <= 1e-6 * p ** (F.n / 2)
    ok &= t.elapsed < 60
    criterion(2, "DFT correctness", ok, f"max dev / p^(n/2) = {worst:.1e}; {t.elapsed:.1f}s")
    assert ok


def test_multiplicativity(criterion):
    F = fixture("F_A")
    rng = random.Random(3)
    worst = 0.0
    ok = True
    with Timer() as t:
        for p, q in ((3, 5), (5, 13)):
            scale = (p * q) ** (F.n / 2)
            for _ in range(100):
                u = [rng.randrange(-10**4, 10**4) for _ in range(F.n)]
                value, _ = expsum.g_composite(F, u, p, q)
                tp = expsum.g_table(F, p)[[c * pow(q, -1, p) for c in u]]
                tq = expsum.g_table(F, q)[[c * pow(p, -1, q) for c in u]]
                dev = abs(value - tp * tq)
                if (p, q) == (3, 5):
                    dev = max(dev, abs(expsum.g_pq_direct(F, u, p, q) - value))
                worst = max(worst, dev / scale)
                ok &= dev <= 1e-6 * scale
    ok &= t.elapsed < 120
    criterion(3, "multiplicativity", ok, f"max dev / (pq)^(n/2) = {worst:.1e}; {t.elapsed:.1f}s")
    assert ok


def test_weil_exponents(criterion):
    F = fixture("F_A")
    rng = random.Random(4)
    violations = 0
    worst = {"good": 0.0, "bad": 0.0, "zero": 0.0}
    limit = {"good": 1.5 + 0.2, "bad": 2.0 + 0.2}
    with Timer() as t:
        for p in primerange(5, 98):
            if not structured.smoothness_mod_p(F, p).smooth:
                continue
            table = expsum.g_table(F, p)
            e0 = math.log(abs(table[(0,) * F.n])) / math.log(p)
            worst["zero"] = max(worst["zero"], e0)
            violations += e0 > 2.5
            for _ in range(200):
                u = [rng.randrange(p) for _ in range(F.n)]
                if not any(u):
                    continue
                kind = expsum.classify(F, u, p).kind
                val = abs(table[u])
                if val <= table.err_budget:
                    continue
                ex = math.log(val) / math.log(p)
                worst[kind] = max(worst[kind], ex)
                violations += ex > limit[kind]
    ok = violations == 0 and t.elapsed < 300
    detail = ", ".join(f"max {k} {v:.3f}" for k, v in worst.items())
    criterion(4, "Weil exponents", ok, f"{violations} violations; {detail}; {t.elapsed:.1f}s")
    assert ok


def test_splitting_identity(criterion):
    F = fixture("F_C")
    rng = random.Random(5)
    worst = 0.0
    ok = True
    fs = []
    with Timer() as t:
        for p in (5, 13):
            fs.append(f"f={math.gcd(F.e, p - 1)} at p={p}")
            us = [(0,) * F.n] + [tuple(rng.randrange(p) for _ in range(F.n)) for _ in range(20)]
            for u in us:
                dev = abs(expsum.split_homogenized(F, u, p) - expsum.solution_sum(F, u, p))
                worst = max(worst, dev / p ** (F.n / 2))
                ok &= dev <= 1e-6 * p ** (F.n / 2)
    ok &= t.elapsed < 60
    criterion(5, "splitting identity", ok, f"{', '.join(fs)}; max dev {worst:.1e}; {t.elapsed:.1f}s")
    assert ok


def test_poisson_identity(criterion):
    F = fixture("F_A")
    w = SmoothWeightSpec(10)
    with Timer() as t:
        trunc = sieve.trunc_for_tail(F, 5, 13, w, 0.5)
        res = sieve.T_poisson(F, 5, 13, w, trunc)
        direct = sieve.T_direct(F, 5, 13, w)
    diff = abs(direct - res.value)
    ok = res.tail_bound < 0.5 and diff <= res.tail_bound + res.err_budget and t.elapsed < 120
    criterion(6, "Poisson identity", ok,
              f"trunc {trunc}, diff {diff:.2e}, tail {res.tail_bound:.3f}, "
              f"err {res.err_budget:.1e}; {t.elapsed:.1f}s")
    assert ok


def test_quadric_dual_biconditional(criterion):
    rng = random.Random(7)
    mismatches = checked = 0
    with Timer() as t:
        for name in ("F_A", "F_D"):
            F = fixture(name)
            G = dualgeom.quadric_dual(F)
            us = []
            while len(us) < 50:
                u = [rng.randrange(-100, 101) for _ in range(F.n)]
                if any(u):
                    us.append(u)
            for p in primerange(3, 51):
                if not structured.smoothness_mod_p(F, p).smooth:
                    continue
                for u in us:
                    if all(c % p == 0 for c in u):
                        continue  # type zero: outside the biconditional
                    bad = dualgeom.classify_mod_p(F, u, p).is_bad
                    mismatches += bad != (dualgeom.dual_at_zero(G, u) % p == 0)
                    checked += 1
    ok = mismatches == 0 and t.elapsed < 120
    criterion(7, "quadric dual biconditional", ok, f"{mismatches}/{checked} mismatches; {t.elapsed:.1f}s")
    assert ok


def test_bad_prime_sparsity(criterion):
    F = fixture("F_A")
    rng = random.Random(8)
    ratio = 0.0
    ok = True
    with Timer() as t:
        for _ in range(100):
            u = [0] * F.n
            while not any(u):
                u = [rng.randrange(-10**6, 10**6 + 1) for _ in range(F.n)]
            size = len(dualgeom.bad_prime_census(F, u, 200))
            allowed = 3 * dualgeom.log_height(F, u)
            ratio = max(ratio, size / allowed)
            ok &= size <= allowed
    ok &= t.elapsed < 180
    criterion(8, "bad-prime sparsity", ok, f"max size / 3 log(|F||u|) = {ratio:.3f}; {t.elapsed:.1f}s")
    assert ok


def test_bad_locus_envelope(criterion):
    D, A = fixture("F_D"), fixture("F_A")
    expo = dualgeom.census_envelope_exponent(D.n)
    ratios = {}
    a_counts = {}
    with Timer() as t:
        for R in (25, 50, 100, 200):
            ratios[R] = dualgeom.bad_locus_census(D, R, dualgeom.census_probes(D, R)) / R**expo
            a_counts[R] = dualgeom.bad_locus_census(A, R, dualgeom.census_probes(A, R))
    constant = max(ratios.values())
    ok = (ratios[100] <= 1.2 * ratios[50] and ratios[200] <= 1.2 * ratios[100]
          and all(c == 1 for c in a_counts.values()) and t.elapsed < 180)
    shown = ", ".join(f"R={R}: {r:.3f}" for R, r in ratios.items())
    criterion(9, "bad-locus envelope", ok,
              f"F_D ratios {shown}; constant {constant:.3f}; F_A counts {list(a_counts.values())}; "
              f"{t.elapsed:.1f}s")
    assert ok


def test_coefficient_reduction(criterion):
    rng = random.Random(10)
    with Timer() as t:
        d = coeffreduce.reduce_decision(fixture("F_A"), 2)
        C = [[rng.randrange(-9, 10) for _ in range(5)] for _ in range(4)]
        C.append([a + 2 * b for a, b in zip(C[0], C[1])])  # 5 x 5 of rank 4
        rank, b = coeffreduce.rank_and_nullvector(C)
        exact = rank == 4 and b is not None and not any(coeffreduce.mat_vec(C, b)) and any(b)
    ok = d.verified and exact and t.elapsed < 60
    criterion(10, "coefficient reduction pipeline", ok,
              f"F_A B=2 {d.kind} rank {d.rank}/{d.E_size}; synthetic rank {rank}; {t.elapsed:.1f}s")
    assert ok


def test_lang_weil_deviation(criterion):
    F = fixture("F_C")
    worst = 0.0
    ok = True
    with Timer() as t:
        for p in (5, 13, 17):
            for size in expsum.split_sizes(F, p):
                dev = abs(size - p**F.n) / p ** (F.n - 0.5)
                worst = max(worst, dev)
                ok &= dev <= 10
    ok &= t.elapsed < 60
    criterion(11, "Lang-Weil deviation", ok, f"max | |W_i| - p^n | / p^(n-1/2) = {worst:.3f}; {t.elapsed:.1f}s")
    assert ok


def test_smoothness_certificates(criterion):
    with Timer() as t:
        A = fixture("F_A")
        certified, prime = structured.smooth_over_C_certificate(A, [3])
        trial = [3, 5, 7, 11, 13]
        rejected = not any(structured.smoothness_mod_p(fixture("F_sing"), p).smooth for p in trial)
        sing_ok, _ = structured.smooth_over_C_certificate(fixture("F_sing"), trial)
        bad = structured.bad_reduction_primes(A, 100)
    ok = certified and prime == 3 and rejected and not sing_ok and bad == [2] and t.elapsed < 60
    criterion(12, "smoothness certificates", ok,
              f"F_A via p={prime}; singular rejected at {trial}: {rejected}; bad primes {bad}; {t.elapsed:.1f}s")
    assert ok


@pytest.mark.parametrize("name", ["F_A", "F_C"])
def test_sieve_report_checks_pass(name):
    rep = sieve.sieve_bound(fixture(name), 8, sieve.SieveParameters(Q=11), poisson=False)
    assert rep.all_pass
