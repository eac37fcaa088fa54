"""Desk-scale invariant suites, grouped by module, with stored expected values."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import algebra, coeffreduce, counting, dualgeom, expsum, sieve, structured
from .fixtures import fixture

MODULES = ("algebra", "structured", "counting", "expsum", "sieve", "dualgeom", "coeffreduce")


@dataclass
class CheckResult:
    module: str
    name: str
    passed: bool
    detail: str = ""
    tolerance: str = "exact"

    def as_dict(self):
        return {"module": self.module, "name": self.name, "pass": self.passed,
                "detail": self.detail, "tolerance": self.tolerance}


def load_expected(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("polysieve").joinpath("data", "expected.json").read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def _algebra(exp, rng):
    out = []
    Y, X1, X2 = algebra.SparsePoly.gens(["Y", "X1", "X2"])
    r = algebra.sylvester_resultant_y(Y**2 - X1, Y)
    out.append(("resultant sign convention", str(r) == exp["resultant_Y2-X1_Y"], str(r)))
    for p, k in ((5, 2), (7, 2), (3, 3)):
        fd = algebra.field(p, k)
        ok = all(fd.pow(a, fd.q - 1) == 1 for a in range(1, fd.q))
        out.append((f"element orders divide q-1 in F_{p}^{k}", ok, ""))
    return out


def _structured(exp, rng):
    out = []
    A = fixture("F_A")
    bad = structured.bad_reduction_primes(A, 100)
    out.append(("F_A bad primes below 100", bad == exp["F_A_bad_primes_below_100"], str(bad)))
    for name in ("F_A", "F_C", "F_D"):
        ok, p = structured.smooth_over_C_certificate(fixture(name), [3, 5, 7])
        out.append((f"{name} certified smooth over C", ok, f"prime {p}"))
    ok, _ = structured.smooth_over_C_certificate(fixture("F_sing"), [3, 5, 7, 11, 13])
    out.append(("singular instance rejected", not ok, ""))
    for name in ("F_A", "F_B", "F_C"):
        F = fixture(name)
        H = structured.unweighted_form(F)
        P = F.polynomial()
        dY = P.partial("Y")
        lhs = H.partial("Z")
        rhs = algebra.SparsePoly(H.variables, {(m[0] * F.e + F.e - 1,) + m[1:]: c * F.e
                                               for m, c in dY.items()})
        out.append((f"{name} chain rule for the Z-derivative", lhs == rhs, ""))
    return out


def _counting(exp, rng):
    out = []
    for name, table in exp["count_N"].items():
        F = fixture(name)
        for B, want in table.items():
            got = counting.count_N(F, int(B))
            out.append((f"count_N {name} B={B}", got == want, f"got {got}, stored {want}"))
    for name in ("F_A", "F_C"):
        F = fixture(name)
        for p in (3, 5, 7, 11, 13):
            mx = int(counting.nu_grid(F, p).max())
            out.append((f"nu bound {name} p={p}", mx <= F.D, f"max {mx}"))
    for name in ("F_A", "F_C"):
        F = fixture(name)
        ok = all(counting.count_N(F, B) == counting.count_N_scan(F, B) for B in range(3))
        out.append((f"divisor search equals scan {name}", ok, ""))
    return out


def _expsum(exp, rng):
    out = []
    A = fixture("F_A")
    for key, want in exp["g0"].items():
        name, p = key.split("@")
        got = expsum.g_table(fixture(name), int(p))[(0,) * 3]
        out.append((f"g(0,{p}) for {name}", abs(got - want) <= 1e-9, f"got {got.real:.6f}", "err_budget"))
    for name in ("F_A", "F_C"):
        F = fixture(name)
        for p in (3, 5, 7):
            t = expsum.g_table(F, p)
            dev = max(abs(t[u] - expsum.g_direct(F, u, p)) for u in np.ndindex(*(p,) * 3))
            out.append((f"DFT equals direct sum {name} p={p}", dev <= 1e-6 * p**1.5, f"{dev:.2e}", "1e-6 p^(n/2)"))
            x = counting.nu_grid(F, p).astype(float) - 1
            lhs = float((np.abs(t.values) ** 2).sum())
            rhs = p**3 * float((x**2).sum())
            out.append((f"Parseval {name} p={p}", abs(lhs - rhs) <= 1e-9 * rhs, "", "relative 1e-9"))
    for _ in range(10):
        u = [rng.randrange(-50, 50) for _ in range(3)]
        v, err = expsum.g_composite(A, u, 3, 5)
        d = expsum.g_pq_direct(A, u, 3, 5)
        out.append((f"multiplicativity u={u}", abs(v - d) <= 1e-6 * 15**1.5, "", "1e-6 (pq)^(n/2)"))
    C = fixture("F_C")
    for p in (5, 13):
        for u in [(0, 0, 0)] + [tuple(rng.randrange(p) for _ in range(3)) for _ in range(3)]:
            lhs = expsum.split_homogenized(C, u, p)
            rhs = expsum.solution_sum(C, u, p)
            out.append((f"split identity F_C p={p} u={u}", abs(lhs - rhs) <= 1e-6 * p**1.5, "", "1e-6 p^(n/2)"))
    return out


def _sieve(exp, rng):
    out = []
    A = fixture("F_A")
    sset = sieve.build_sieving_set(A, 11, 2)
    out.append(("sieving set F_A Q=11", list(sset.primes) == exp["sieving_set_F_A_Q11"], str(sset.primes)))
    w = sieve.SmoothWeightSpec(10)
    d = sieve.T_direct(A, 5, 13, w)
    out.append(("T_direct fixture F_A (5,13) B=10", abs(d - exp["T_direct_F_A_5_13_B10"]) <= 1e-9,
                f"{d:.9f}", "compensated sum"))
    trunc = sieve.trunc_for_tail(A, 5, 13, w)
    r = sieve.T_poisson(A, 5, 13, w, trunc)
    out.append(("Poisson identity F_A (5,13) B=10", abs(r.value - d) <= r.tail_bound + r.err_budget,
                f"diff {abs(r.value - d):.2e}, tail {r.tail_bound:.2e}", "tail_bound + err_budget"))
    rep = sieve.sieve_bound(A, 8, sieve.SieveParameters(Q=11), poisson=False)
    out.append(("sieve report checks F_A B=8", rep.all_pass, ""))
    return out


def _dualgeom(exp, rng):
    out = []
    for name in ("F_A", "F_D"):
        F = fixture(name)
        G = dualgeom.quadric_dual(F)
        bad = 0
        for _ in range(10):
            u = [rng.randrange(-30, 30) for _ in range(3)]
            if not any(u):
                continue
            for p in (3, 5, 7, 11, 13):
                if all(c % p == 0 for c in u):
                    continue
                c = dualgeom.classify_mod_p(F, u, p)
                bad += c.is_bad != (dualgeom.dual_at_zero(G, u) % p == 0)
        out.append((f"quadric dual biconditional {name}", bad == 0, f"{bad} mismatches"))
    A = fixture("F_A")
    for u, want in exp["bad_prime_census_F_A"].items():
        got = dualgeom.bad_prime_census(A, json.loads(u), 50)
        out.append((f"bad primes of {u}", got == want, str(got)))
    got = dualgeom.bad_locus_census(A, 10, dualgeom.census_probes(A, 10))
    out.append(("F_A census is the origin only", got == 1, str(got)))
    return out


def _coeffreduce(exp, rng):
    A = fixture("F_A")
    d = coeffreduce.reduce_decision(A, 2)
    return [("F_A B=2 certificate", d.verified, d.kind)]


SUITES: dict[str, Callable] = {
    "algebra": _algebra, "structured": _structured, "counting": _counting, "expsum": _expsum,
    "sieve": _sieve, "dualgeom": _dualgeom, "coeffreduce": _coeffreduce,
}


def run_suites(only: str | None = None, fixtures_path=None, seed: int = 0) -> list[CheckResult]:
    exp = load_expected(fixtures_path)
    names = MODULES if only is None else tuple(s.strip() for s in only.split(","))
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(MODULES)}")
        rng = random.Random(f"{seed}:{name}")
        for item in SUITES[name](exp, rng):
            label, passed, detail, *tol = item
            results.append(CheckResult(name, label, bool(passed), detail, tol[0] if tol else "exact"))
    return results
