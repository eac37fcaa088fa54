"""Exponential sums g(u, p) = sum_a (nu_p(a) - 1) e_p(<a, u>) and relatives.

Whole tables come from an n-dimensional inverse DFT of nu_p - 1; single
values are also available by direct summation, which serves as the oracle.
"""

from __future__ import annotations

import functools
import math
import struct
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Sequence

import numpy as np
from sympy import factorint

from .algebra import field
from .counting import form_grids, nu_grid, nu_grid_scalar
from .dualgeom import (GOOD, TYPE_ZERO, BadReductionError, Classification, TangencyWitness,
                       classify_mod_p, normalize_mod_p)
from .structured import StructuredF, smoothness_mod_p

__all__ = [
    "ExpSumTable", "g_table", "g_direct", "g_composite", "g_pq_direct", "split_homogenized",
    "split_components", "split_sizes", "solution_sum", "coset_generator", "classify", "weil_check",
    "Classification", "TangencyWitness", "BadReductionError", "TYPE_ZERO", "GOOD",
]

_EPS = np.finfo(float).eps
_HEADER = struct.Struct("<IId")


@dataclass(frozen=True, eq=False)
class ExpSumTable:
    p: int
    n: int
    values: np.ndarray  # complex, shape (p,)*n, indexed by u mod p
    err_budget: float

    def __getitem__(self, u) -> complex:
        return complex(self.values[tuple(int(c) % self.p for c in u)])

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())

    def dump(self, path: str | Path) -> None:
        """Header (p, n, err_budget) then little-endian (re, im) float64 pairs, row-major u."""
        data = np.ascontiguousarray(self.values, dtype="<c16")
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(self.p, self.n, self.err_budget))
            fh.write(data.tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "ExpSumTable":
        raw = Path(path).read_bytes()
        p, n, err = _HEADER.unpack_from(raw)
        body = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
        if body.size != p**n:
            raise ValueError(f"expected {p ** n} entries, found {body.size}")
        return cls(p, n, body.reshape((p,) * n).astype(complex), err)


def _fft_error(x: np.ndarray) -> float:
    """Entrywise error bound for an unnormalized length-N DFT of real x."""
    N = x.size
    return 10 * _EPS * (math.log2(N) + 1) * math.sqrt(N) * float(np.linalg.norm(x.ravel()))


@functools.lru_cache(maxsize=128)
def g_table(F: StructuredF, p: int) -> ExpSumTable:
    """g(u, p) for every u in F_p^n via an n-dimensional DFT."""
    if p == 2:
        raise ValueError("p = 2 is not supported")
    x = nu_grid(F, p).astype(float) - 1.0
    # numpy's inverse transform uses e(+<a,u>/p) and divides by p^n
    vals = np.fft.ifftn(x) * p**F.n
    vals.setflags(write=False)
    return ExpSumTable(p, F.n, vals, _fft_error(x))


def _char_sum(counts: np.ndarray, modulus: int) -> complex:
    """sum_t counts[t] e(t / modulus) with compensated summation."""
    t = np.nonzero(counts)[0]
    c = counts[t]
    ang = 2 * math.pi * t / modulus
    re = math.fsum((c * np.cos(ang)).tolist())
    im = math.fsum((c * np.sin(ang)).tolist())
    return complex(re, im)


def _dot_mod(shape_p: int, n: int, u: Sequence[int], modulus: int) -> np.ndarray:
    dots = np.zeros((shape_p,) * n, dtype=np.int64)
    for i, c in enumerate(u):
        sh = [1] * n
        sh[i] = shape_p
        dots = dots + (np.arange(shape_p, dtype=np.int64) * (int(c) % modulus)).reshape(sh)
    return dots % modulus


def g_direct(F: StructuredF, u: Sequence[int], p: int) -> complex:
    """Direct summation over F_p^n using scalar root counts."""
    if len(u) != F.n:
        raise ValueError(f"expected {F.n} coordinates, got {len(u)}")
    weights = nu_grid_scalar(F, p) - 1
    dots = _dot_mod(p, F.n, u, p)
    counts = np.bincount(dots.ravel(), weights=weights.ravel(), minlength=p)
    return _char_sum(np.rint(counts).astype(np.int64), p)


def solution_sum(F: StructuredF, u: Sequence[int], p: int) -> complex:
    """sum over (y, a) with F(y, a) = 0 of e_p(<a, u>)."""
    counts = np.bincount(_dot_mod(p, F.n, u, p).ravel(),
                         weights=nu_grid_scalar(F, p).ravel(), minlength=p)
    return _char_sum(np.rint(counts).astype(np.int64), p)


def _crt_twists(p: int, q: int) -> tuple[int, int]:
    """(q-bar mod p, p-bar mod q)."""
    return pow(q, -1, p), pow(p, -1, q)


def g_composite(F: StructuredF, u: Sequence[int], p: int, q: int) -> tuple[complex, float]:
    """g(u, pq) = g(q-bar u, p) g(p-bar u, q), with its error bound."""
    if p == q:
        raise ValueError("p and q must differ")
    qb, pb = _crt_twists(p, q)
    tp, tq = g_table(F, p), g_table(F, q)
    a = tp[[c * qb for c in u]]
    b = tq[[c * pb for c in u]]
    err = abs(a) * tq.err_budget + abs(b) * tp.err_budget + tp.err_budget * tq.err_budget
    return a * b, err


def g_pq_direct(F: StructuredF, u: Sequence[int], p: int, q: int) -> complex:
    """The (pq)^n-point definition sum_a (nu_p - 1)(nu_q - 1) e_pq(<a, u>)."""
    L = p * q
    idx = np.arange(L)
    n = F.n
    wp = nu_grid(F, p)[np.ix_(*([idx % p] * n))] - 1
    wq = nu_grid(F, q)[np.ix_(*([idx % q] * n))] - 1
    dots = _dot_mod(L, n, u, L)
    counts = np.bincount(dots.ravel(), weights=(wp * wq).ravel(), minlength=L)
    return _char_sum(np.rint(counts).astype(np.int64), L)


# ---------------------------------------------------------------------------
# splitting by the e-th power classes


def coset_generator(p: int, f: int) -> int:
    """Least a in F_p^x whose class generates F_p^x / (F_p^x)^f."""
    if (p - 1) % f:
        raise ValueError(f"{f} does not divide {p}-1")
    primes = list(factorint(f))
    for a in range(1, p):
        if all(pow(a, (p - 1) // r, p) != 1 for r in primes):
            return a
    raise AssertionError("unreachable: F_p^x is cyclic")


@functools.lru_cache(maxsize=64)
def _split_counts(F: StructuredF, p: int) -> tuple[int, tuple[np.ndarray, ...]]:
    """f and, for each i, the array a -> #{z in F_p : F(gamma^i z^e, a) = 0}."""
    f = gcd(F.e, p - 1)
    gamma = coset_generator(p, f)
    forms = form_grids(F, p)
    shape = (p,) * F.n
    # zero indicator of F(y, a) for each y, built once
    zero_at = []
    for y in range(p):
        acc = np.full(shape, pow(y, F.D, p), dtype=np.int64)
        for i, v in enumerate(forms, 1):
            acc = (acc + pow(y, F.m * (F.d - i), p) * v) % p
        zero_at.append(acc == 0)
    out = []
    for i in range(f):
        c = np.zeros(shape, dtype=np.int64)
        g_i = pow(gamma, i, p)
        for z in range(p):
            c += zero_at[g_i * pow(z, F.e, p) % p]
        c.setflags(write=False)
        out.append(c)
    return f, tuple(out)


def split_components(F: StructuredF, u: Sequence[int], p: int) -> list[complex]:
    """g_i(u) = sum over W_i of e_p(<a, u>), i = 0..f-1."""
    _, counts = _split_counts(F, p)
    dots = _dot_mod(p, F.n, u, p).ravel()
    return [_char_sum(np.bincount(dots, weights=c.ravel(), minlength=p).astype(np.int64), p)
            for c in counts]


def split_homogenized(F: StructuredF, u: Sequence[int], p: int) -> complex:
    """(1/f) sum_i sum_{W_i} e_p(<a, u>) with f = gcd(e, p - 1)."""
    comps = split_components(F, u, p)
    return sum(comps) / len(comps)


def split_sizes(F: StructuredF, p: int) -> list[int]:
    """|W_i| for i = 0..f-1."""
    _, counts = _split_counts(F, p)
    return [int(c.sum()) for c in counts]


# ---------------------------------------------------------------------------
# classification and exponent checks


def classify(F: StructuredF, u: Sequence[int], p: int, k_max: int = 2) -> Classification:
    """TypeZero, Good or Bad(witness); raises BadReductionError at bad primes."""
    return classify_mod_p(F, u, p, k_max)


TARGET_EXPONENT = {"zero": lambda n: n - 0.5, "good": lambda n: n / 2, "bad": lambda n: (n + 1) / 2}


def weil_check(F: StructuredF, p: int, sample: Sequence[Sequence[int]], k_max: int = 2,
               ceiling: float = 8.0) -> list[dict]:
    """Per-u record of |g|, type, log|g|/log p and the ratio to p^(target exponent).

    A Good u whose ratio to p^(n/2) exceeds ``ceiling`` is flagged: an
    under-searched tangency (k_max too small) can only turn Bad into Good.
    """
    if not smoothness_mod_p(F, p, k_max).smooth:
        raise BadReductionError(f"{p} is a prime of bad reduction")
    table = g_table(F, p)
    rows = []
    for u in sample:
        u = tuple(int(c) for c in u)
        cls = classify(F, u, p, k_max)
        val = abs(table[u])
        target = TARGET_EXPONENT[cls.kind](F.n)
        ratio = val / p**target
        rows.append({
            "u": list(u),
            "abs_g": val,
            "type": str(cls),
            "exponent": math.log(val) / math.log(p) if val > table.err_budget else float("-inf"),
            "target_exponent": target,
            "ratio": ratio,
            "flag": cls.is_good and ratio > ceiling,
            "tolerance": table.err_budget,
        })
    return rows


def scaling_orbit(u: Sequence[int], p: int) -> list[tuple[int, ...]]:
    return [tuple(c * a % p for c in u) for a in range(1, p)]


def projective_class(u: Sequence[int], p: int) -> tuple[int, ...]:
    return normalize_mod_p(u, p)
