"""Sieving sets, the pair correlations T(p, q), and the assembled sieve bound."""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from sympy import primerange

from .counting import box_data, count_N, nu_on_box, omega, weight_array
from .dualgeom import bad_or_zero_table
from .expsum import g_table
from .structured import GoodReductionCert, StructuredF, smooth_over_C_certificate, smoothness_mod_p
from .weights import (SmoothWeightSpec, fourier_abs_sum, fourier_tail_1d, weight_fourier_1d)

log = logging.getLogger(__name__)

__all__ = [
    "SmoothWeightSpec", "SievingSet", "SieveParameters", "SieveReport", "PoissonResult",
    "build_sieving_set", "choose_Q", "T_direct", "T_poisson", "trunc_for_tail", "sieve_bound",
    "per_k_inequality", "sieve_chain",
]


@dataclass(frozen=True)
class SievingSet:
    Q: float
    m: int
    primes: tuple[int, ...]
    certs: tuple[GoodReductionCert, ...]
    warnings: tuple[str, ...] = ()

    @property
    def P(self) -> int:
        return len(self.primes)


def build_sieving_set(F: StructuredF, Q: float, m: int | None = None, k_max: int = 2) -> SievingSet:
    """Primes p in [Q, 2Q] with p = 1 mod m and certified smooth reduction."""
    if Q < 3:
        raise ValueError("Q must be at least 3")
    m = F.m if m is None else m
    primes, certs = [], []
    for p in primerange(math.ceil(Q), math.floor(2 * Q) + 1):
        if p % m != 1 or p == 2:
            continue
        cert = smoothness_mod_p(F, p, k_max)
        if cert.smooth:
            primes.append(p)
            certs.append(cert)
    if not primes:
        raise ValueError(f"no admissible primes in [{Q}, {2 * Q}]")
    warnings = []
    if len(primes) < Q / (2 * math.log(Q)):
        warnings.append(f"P = {len(primes)} is below Q/(2 log Q) = {Q / (2 * math.log(Q)):.2f}")
    return SievingSet(Q, m, tuple(primes), tuple(certs), tuple(warnings))


def choose_Q(B: float, n: int) -> float:
    """Q = B^{n/(n+1)} (log B)^{1/(n+1)}, natural logarithm."""
    if B <= math.e:
        raise ValueError("B must exceed e")
    return B ** (n / (n + 1)) * math.log(B) ** (1 / (n + 1))


@dataclass(frozen=True)
class SieveParameters:
    """Exponents of the analytic argument; ``Q`` set means desk mode."""

    kappa: float | None = None
    alpha: float | None = None
    M: int | None = None
    trunc: int | None = None
    Q: float | None = None
    paper_mode: bool = False
    eps: float = 0.01

    def __post_init__(self):
        if self.Q is not None and self.kappa is not None:
            raise ValueError("give either Q or kappa, not both")
        if self.paper_mode and self.kappa is not None and not 0.75 <= self.kappa <= 1:
            raise ValueError("paper mode requires 3/4 <= kappa <= 1")
        if self.alpha is not None and not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")

    def alpha_for(self, n: int) -> float:
        return self.alpha if self.alpha is not None else 1 / (24 * (n - 5 / 3 + self.eps))

    def M_for(self, n: int) -> int:
        if self.M is not None:
            return self.M
        return max(2 * n, math.ceil(1 / self.alpha_for(n) + 1))


# ---------------------------------------------------------------------------
# T(p, q)


def _check_pair(p: int, q: int):
    if p == q:
        raise ValueError("T(p, q) needs distinct primes")


def T_direct(F: StructuredF, p: int, q: int, w: SmoothWeightSpec) -> float:
    """sum_k W(k) (nu_p(k) - 1)(nu_q(k) - 1) over the weight support."""
    _check_pair(p, q)
    R = w.support
    W = weight_array(w, F.n, R)
    prod = (nu_on_box(F, p, R) - 1) * (nu_on_box(F, q, R) - 1)
    mask = prod != 0
    return math.fsum((W[mask] * prod[mask]).tolist())


@dataclass
class PoissonResult:
    value: float
    tail_bound: float
    err_budget: float
    imag: float
    trunc: int
    by_type: dict = dc_field(default_factory=dict)

    def __iter__(self):
        return iter((self.value, self.tail_bound))


def _folded_fourier(w: SmoothWeightSpec, L: int, trunc: int) -> tuple[np.ndarray, np.ndarray, float]:
    """A[r] = sum_{|u|<=trunc, u=r mod L} w-hat(u/L), its error, and sum |w-hat|."""
    A = np.zeros(L)
    dA = np.zeros(L)
    total = 0.0
    for u in range(-trunc, trunc + 1):
        v, e = weight_fourier_1d(w, u / L)
        A[u % L] += v
        dA[u % L] += e
        total += abs(v)
    return A, dA, total


def _crt_matrix(vec: np.ndarray, p: int, q: int) -> np.ndarray:
    """M[a, b] = vec[r] for the r mod pq with r = a mod p, r = b mod q."""
    L = p * q
    r = np.arange(L)
    M = np.zeros((p, q), dtype=vec.dtype)
    M[r % p, r % q] = vec
    return M


def _contract(Gp: np.ndarray, Gq: np.ndarray, M: np.ndarray) -> complex:
    """sum_{a, b} Gp[a] Gq[b] prod_i M[a_i, b_i]."""
    out = Gq
    n = Gq.ndim
    # fold one q-axis at a time into a p-axis
    for _ in range(n):
        out = np.tensordot(out, M, axes=([0], [1]))  # moves the new p-axis to the end
    return complex(np.sum(Gp * out))


def _type_masks(F: StructuredF, p: int, k_max: int) -> dict[str, np.ndarray]:
    bz = bad_or_zero_table(F, p, k_max)
    zero = np.zeros_like(bz)
    zero[(0,) * F.n] = True
    return {"zero": zero, "good": ~bz, "bad": bz & ~zero}


def _twisted(table, factor: int) -> np.ndarray:
    """G'[a] = g(factor * a)."""
    p, n = table.p, table.n
    idx = np.arange(p) * factor % p
    return table.values[np.ix_(*([idx] * n))]


def T_poisson(F: StructuredF, p: int, q: int, w: SmoothWeightSpec, trunc: int,
              k_max: int = 2, by_type: bool = False) -> PoissonResult:
    """(pq)^-n sum over ||u||_inf <= trunc of W-hat(u/pq) g(u, pq), with tail and error bounds."""
    _check_pair(p, q)
    if trunc < 0:
        raise ValueError("trunc must be non-negative")
    n = F.n
    L = p * q
    tp, tq = g_table(F, p), g_table(F, q)
    Gp = _twisted(tp, pow(q, -1, p))
    Gq = _twisted(tq, pow(p, -1, q))
    A, dA, abs_sum = _folded_fourier(w, L, trunc)
    M = _crt_matrix(A, p, q)
    S = _contract(Gp, Gq, M)
    scale = float(L) ** n
    # error from the tables, the quadrature and the contraction itself
    gmax_p, gmax_q = tp.max_abs(), tq.max_abs()
    gmax = gmax_p * gmax_q
    absA = float(np.abs(A).sum())
    table_err = (gmax_p * tq.err_budget + gmax_q * tp.err_budget + tp.err_budget * tq.err_budget) * absA**n
    quad_err = (gmax + table_err / max(absA**n, 1e-300)) * ((absA + float(dA.sum())) ** n - absA**n)
    round_err = 64 * np.finfo(float).eps * (n + 1) * math.log2(L + 1) * gmax * absA**n
    err = (table_err + quad_err + round_err) / scale
    # tail beyond the truncation cube, from the measured decay constant
    Tl = fourier_tail_1d(w, L, trunc)
    tail = gmax * ((abs_sum + Tl) ** n - abs_sum**n) / scale
    res = PoissonResult(S.real / scale, tail, err, S.imag / scale, trunc)
    if by_type:
        mp, mq = _type_masks(F, p, k_max), _type_masks(F, q, k_max)
        for (ka, ma), (kb, mb) in itertools.product(mp.items(), mq.items()):
            res.by_type[f"{ka}-{kb}"] = _contract(Gp * ma, Gq * mb, M).real / scale
    return res


def trunc_for_tail(F: StructuredF, p: int, q: int, w: SmoothWeightSpec, target: float = 0.5,
                   start: int = 0, cap: int = 1 << 14) -> int:
    """Smallest truncation radius (doubling, then bisection) with tail bound below target."""
    n = F.n
    L = p * q
    gmax = g_table(F, p).max_abs() * g_table(F, q).max_abs()

    def tail(t):
        abs_sum = fourier_abs_sum(w, L, t)
        return gmax * ((abs_sum + fourier_tail_1d(w, L, t)) ** n - abs_sum**n) / float(L) ** n

    hi = max(1, start)
    while tail(hi) >= target:
        hi *= 2
        if hi > cap:
            raise ValueError(f"tail bound stays above {target} up to trunc {cap}")
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if tail(mid) < target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# the sieve inequality


def per_k_inequality(F: StructuredF, R: int, primes: Sequence[int]) -> dict:
    """Check sum_p (nu_p(k)-1) >= (m-1)(P - omega(f_d(k))) for solvable k with f_d(k) != 0."""
    data = box_data(F, R)
    fd = data.forms[-1]
    sel = data.solvable & (fd != 0)
    total = sum(nu_on_box(F, p, R) - 1 for p in primes)
    P = len(primes)
    checked = violations = 0
    slack = None
    omega_cache: dict[int, int] = {}
    for idx in zip(*np.nonzero(sel)):
        v = int(fd[idx])
        om = omega_cache.get(v)
        if om is None:
            om = omega_cache[v] = omega(v)
        lhs = int(total[idx])
        rhs = (F.m - 1) * (P - om)
        checked += 1
        violations += lhs < rhs
        slack = lhs - rhs if slack is None else min(slack, lhs - rhs)
    return {"checked": checked, "violations": violations, "min_slack": slack}


def sieve_chain(F: StructuredF, w: SmoothWeightSpec, primes: Sequence[int]) -> dict:
    """P_eff^2 sum_{solvable, f_d != 0} W <= sum_k W (sum_p (nu_p - 1))^2."""
    R = w.support
    data = box_data(F, R)
    W = weight_array(w, F.n, R)
    total = sum(nu_on_box(F, p, R) - 1 for p in primes)
    sel = data.solvable & (data.forms[-1] != 0)
    p_eff = int(total[sel].min()) if sel.any() else 0
    lhs = p_eff**2 * math.fsum(W[sel].tolist())
    rhs = math.fsum((W * total.astype(float) ** 2).ravel().tolist())
    return {"P_eff": p_eff, "lhs": lhs, "rhs": rhs, "holds": p_eff >= 0 and lhs <= rhs}


@dataclass
class SieveReport:
    instance: str
    B: float
    mode: str
    Q: float
    primes: list
    N: int | None = None
    S: float | None = None
    S1: float | None = None
    S2: float | None = None
    S3: float | None = None
    pairs: list = dc_field(default_factory=list)
    constants: dict = dc_field(default_factory=dict)
    checks: dict = dc_field(default_factory=dict)
    warnings: list = dc_field(default_factory=list)

    def check(self, name: str, passed: bool, tolerance: str, anchor: str, **values):
        self.checks[name] = {"pass": bool(passed), "tolerance": tolerance, "anchor": anchor, **values}

    @property
    def all_pass(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "instance": self.instance, "B": self.B, "mode": self.mode, "Q": self.Q,
            "primes": list(self.primes), "P": len(self.primes),
            "N": self.N, "S": self.S, "S1": self.S1, "S2": self.S2, "S3": self.S3,
            "pairs": self.pairs, "constants": self.constants, "checks": self.checks,
            "warnings": self.warnings, "all_pass": self.all_pass,
        }


def sieve_bound(F: StructuredF, B: int, params: SieveParameters | None = None,
                w: SmoothWeightSpec | None = None, k_max: int = 2,
                poisson: bool = True, tail_target: float = 0.5,
                trial_primes: Sequence[int] = (3, 5, 7, 11, 13), threads: int = 1) -> SieveReport:
    """All sieve terms for F at scale B.

    Desk mode (params.Q set) enumerates everything; paper mode only reports
    the symbolic sizes of the terms at Q = choose_Q(B, n) or B^kappa.
    """
    params = params or SieveParameters(Q=11)
    ok, _ = smooth_over_C_certificate(F, trial_primes, k_max)
    if not ok:
        raise ValueError(f"{F} could not be certified smooth over C")
    n = F.n
    if params.Q is None:
        Q = choose_Q(B, n) if params.kappa is None else float(B) ** params.kappa
        report = SieveReport(str(F), B, "paper", Q, [])
        alpha = params.alpha_for(n)
        report.constants.update({
            "kappa": math.log(Q) / math.log(B), "alpha": alpha, "M": params.M_for(n),
            "B^n/P (P ~ Q/log Q)": B**n * math.log(Q) / Q, "Q^n": Q**n,
            "zero-type B^n/Q": B**n / Q,
            "census box side Q^2/B^(1-alpha)": Q**2 / B ** (1 - alpha),
            "target B^(n-1+1/(n+1)) (log B)^(n/(n+1))":
                B ** (n - 1 + 1 / (n + 1)) * math.log(B) ** (n / (n + 1)),
        })
        return report

    w = w or SmoothWeightSpec(B)
    sset = build_sieving_set(F, params.Q, F.m, k_max)
    primes = list(sset.primes)
    P = len(primes)
    report = SieveReport(str(F), B, "desk", params.Q, primes, warnings=list(sset.warnings))
    R = w.support
    data = box_data(F, R)
    W = weight_array(w, n, R)
    report.N = count_N(F, B)
    report.S = math.fsum(W[data.solvable].tolist())
    report.S1 = math.fsum(W[data.forms[-1] == 0].tolist())
    report.S2 = math.fsum(W.ravel().tolist()) / P
    pairs = list(itertools.combinations(primes, 2))
    # results are collected in pair order, so the report does not depend on threads
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        values = list(pool.map(lambda pq: T_direct(F, pq[0], pq[1], w), pairs))
    Ts = dict(zip(pairs, values))
    report.S3 = 2 * math.fsum(abs(t) for t in Ts.values()) / P**2

    report.check("N <= S", report.N <= report.S, "exact", "weight dominates the box indicator",
                 N=report.N, S=report.S)
    rhs = report.S1 + report.S2 + report.S3
    report.constants["S / (S1 + S2 + S3)"] = report.S / rhs if rhs else float("inf")
    pk = per_k_inequality(F, R, primes)
    report.check("per-k root lower bound", pk["violations"] == 0, "exact",
                 "sum_p (nu_p - 1) >= (m-1)(P - omega(f_d(k)))", **pk)
    chain = sieve_chain(F, w, primes)
    report.check("sieve chain", chain["holds"], "exact",
                 "P_eff^2 sum W <= sum W (sum_p (nu_p - 1))^2", **chain)
    hyp = max(math.log(max(2, F.last_form.norm())), math.log(B))
    if P < hyp:
        report.warnings.append(f"P = {P} is below max(log ||f_d||, log B) = {hyp:.2f}")

    totals = {"zero": 0.0, "good": 0.0, "bad": 0.0, "bad-bad": 0.0}
    max_sum_ratio = 0.0
    for (p, q), t in Ts.items():
        row = {"p": p, "q": q, "T_direct": t}
        if poisson:
            trunc = params.trunc if params.trunc is not None else trunc_for_tail(F, p, q, w, tail_target)
            res = T_poisson(F, p, q, w, trunc, k_max, by_type=True)
            diff = abs(res.value - t)
            row.update({"T_poisson": res.value, "tail_bound": res.tail_bound,
                        "err_budget": res.err_budget, "trunc": trunc, "by_type": res.by_type,
                        "poisson_ok": diff <= res.tail_bound + res.err_budget})
            for key, v in res.by_type.items():
                if "zero" in key:
                    totals["zero"] += abs(v)
                elif "bad" in key:
                    totals["bad"] += abs(v)
                else:
                    totals["good"] += abs(v)
            totals["bad-bad"] += abs(res.by_type.get("bad-bad", 0.0))
            L = p * q
            ratio = fourier_abs_sum(w, L, trunc) ** n / max(B**n, L**n)
            max_sum_ratio = max(max_sum_ratio, ratio)
        report.pairs.append(row)
    if poisson:
        report.check("Poisson identity", all(r["poisson_ok"] for r in report.pairs),
                     "tail_bound + err_budget", "T by direct sum equals its Poisson side")
        report.constants["poisson contribution by type"] = totals
        report.constants["bad-bad / Q^n"] = totals["bad-bad"] / params.Q**n
        report.constants["sum |W-hat(u/L)| / max(B^n, L^n)"] = max_sum_ratio
    return report
