"""Tangent hyperplanes: witnesses, per-prime classification, and the dual quadric.

A nonzero u mod p is bad when the hyperplane <X, u> = 0 is tangent to
V(F(Z^e, X)) over the algebraic closure, i.e. some point of the intersection
makes the matrix [grad F(Z^e, X) | (0, u)] drop to rank one.  Tangency is
decided by a common-zero search over F_{p^k}, k <= k_max.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy import nextprime, primerange

from .algebra import SparsePoly, bareiss_det, field
from .structured import StructuredF, smoothness_mod_p, unweighted_form
from .zerosearch import projective_zero_search


class BadReductionError(ValueError):
    """Classification was requested at a prime of bad reduction."""


@dataclass(frozen=True)
class TangencyWitness:
    u: tuple[int, ...]
    p: int
    k: int
    point: tuple[int, ...]  # encodings in F_{p^k}, coordinates (Z, X1..Xn)

    def elems(self):
        fd = field(self.p, self.k)
        return tuple(fd.elem(c) for c in self.point)


@dataclass(frozen=True)
class Classification:
    kind: str  # "zero", "good" or "bad"
    witness: TangencyWitness | None = None

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_good(self) -> bool:
        return self.kind == "good"

    @property
    def is_bad(self) -> bool:
        return self.kind == "bad"

    def __str__(self):
        return {"zero": "TypeZero", "good": "Good", "bad": "Bad"}[self.kind]


TYPE_ZERO = Classification("zero")
GOOD = Classification("good")


def tangency_polys(F: StructuredF, u: Sequence[int]) -> list[SparsePoly]:
    """H_0 = F(Z^e, X), the n listed 2x2 minors, and H_{n+1} = <X, u>."""
    u = [int(c) for c in u]
    if len(u) != F.n:
        raise ValueError(f"expected {F.n} coordinates, got {len(u)}")
    if not any(u):
        raise ValueError("u must be nonzero")
    H = unweighted_form(F)
    grads = [H.partial(v) for v in H.variables]  # d/dZ, d/dX1, ..., d/dXn
    out = [H, grads[0] * u[0]]
    for i in range(2, F.n + 1):
        out.append(grads[i - 1] * u[i - 1] - grads[i] * u[i - 2])
    xs = SparsePoly.gens(H.variables)[1:]
    out.append(sum((x * c for x, c in zip(xs, u)), SparsePoly.const(H.variables, 0)))
    return out


def jacobian_rank_at_most_one(F: StructuredF, u: Sequence[int], point: Sequence[int], p: int, k: int) -> bool:
    """Exact check that [grad H_0 | (0, u)] has rank <= 1 at a point of H_0 = <X,u> = 0."""
    fd = field(p, k)
    H = unweighted_form(F)
    if H.eval_codes(point, fd) != 0:
        return False
    ucodes = [c % p for c in u]
    lin = 0
    for x, c in zip(point[1:], ucodes):
        lin = fd.add(lin, fd.mul(x, c))
    if lin:
        return False
    col1 = [H.partial(v).eval_codes(point, fd) for v in H.variables]
    col2 = [0] + ucodes
    for i in range(len(col1)):
        for j in range(i + 1, len(col1)):
            if fd.sub(fd.mul(col1[i], col2[j]), fd.mul(col1[j], col2[i])):
                return False
    return True


def normalize_mod_p(u: Sequence[int], p: int) -> tuple[int, ...]:
    """Representative of the projective class of u mod p (first nonzero = 1)."""
    r = [c % p for c in u]
    for c in r:
        if c:
            inv = pow(c, -1, p)
            return tuple(x * inv % p for x in r)
    return tuple(r)


def _restricted_system(F: StructuredF, u: tuple[int, ...], p: int):
    """Tangency conditions with X_j eliminated through <X, u> = 0 (u_j != 0)."""
    fd = field(p)
    H = unweighted_form(F).reduce(fd)
    variables = H.variables
    j = max(i for i, c in enumerate(u) if c)
    xj = variables[j + 1]
    gens = SparsePoly.gens(variables, fd)
    inv = pow(u[j], -1, p)
    repl = SparsePoly.const(variables, 0, fd)
    for i, c in enumerate(u):
        if i != j and c:
            repl = repl + gens[i + 1] * (-c * inv % p)
    grads = [H.partial(v) for v in variables]
    system = [H, grads[0]]
    for i in range(F.n):
        if i != j:
            system.append(grads[i + 1] * u[j] - grads[j + 1] * u[i])
    rest = variables[: j + 1] + variables[j + 2:]
    system = [f.substitute({xj: repl}).with_variables(rest) for f in system]
    return system, rest, j


def find_tangency(F: StructuredF, u: Sequence[int], p: int, k_max: int = 2) -> TangencyWitness | None:
    """A verified tangency point over F_{p^k}, k <= k_max, or None."""
    un = normalize_mod_p(u, p)
    hit = _tangency_search(F, un, p, k_max)
    if hit is None:
        return None
    k, point = hit
    return TangencyWitness(tuple(int(c) for c in u), p, k, point)


@functools.lru_cache(maxsize=1 << 16)
def _tangency_search(F: StructuredF, un: tuple[int, ...], p: int, k_max: int):
    system, rest, j = _restricted_system(F, un, p)
    hit = projective_zero_search(system, rest, p, k_max)
    if hit is None:
        return None
    k, pt = hit
    fd = field(p, k)
    # recover X_j from the hyperplane equation
    inv = pow(un[j], -1, p)
    acc = 0
    xs = pt[1:]
    others = [i for i in range(F.n) if i != j]
    for c_idx, i in enumerate(others):
        acc = fd.add(acc, fd.mul(xs[c_idx], un[i]))
    xj = fd.mul(fd.neg(acc), inv)
    full = list(pt[:1]) + list(xs[:j]) + [xj] + list(xs[j:])
    point = tuple(int(c) for c in full)
    if not jacobian_rank_at_most_one(F, un, point, p, k):
        raise AssertionError("tangency witness failed the rank check")
    return k, point


def classify_mod_p(F: StructuredF, u: Sequence[int], p: int, k_max: int = 2) -> Classification:
    """TypeZero, Good or Bad(witness) for u modulo an odd prime of good reduction."""
    if p == 2:
        raise ValueError("p = 2 is not supported")
    if all(c % p == 0 for c in u):
        return TYPE_ZERO
    if not smoothness_mod_p(F, p, k_max).smooth:
        raise BadReductionError(f"{p} is a prime of bad reduction for {F}")
    w = find_tangency(F, u, p, k_max)
    return GOOD if w is None else Classification("bad", w)


def witness_zeroes_tangency_polys(F: StructuredF, w: TangencyWitness) -> bool:
    fd = field(w.p, w.k)
    return all(h.eval_codes(w.point, fd) == 0 for h in tangency_polys(F, w.u))


@functools.lru_cache(maxsize=256)
def bad_or_zero_table(F: StructuredF, p: int, k_max: int = 2) -> np.ndarray:
    """Boolean array over F_p^n: True where u is TypeZero or Bad."""
    n = F.n
    table = np.zeros((p,) * n, dtype=bool)
    table[(0,) * n] = True
    for a in np.ndindex(*table.shape):
        if not any(a) or normalize_mod_p(a, p) != a:
            continue
        if classify_mod_p(F, a, p, k_max).is_bad:
            for s in range(1, p):
                table[tuple(x * s % p for x in a)] = True
    table.setflags(write=False)
    return table


def bad_prime_census(F: StructuredF, u: Sequence[int], prime_bound: int, k_max: int = 2) -> list[int]:
    """Odd good-reduction primes p <= prime_bound at which u is bad."""
    if not any(u):
        raise ValueError("u must be nonzero")
    out = []
    for p in primerange(3, prime_bound + 1):
        if not smoothness_mod_p(F, p, k_max).smooth:
            continue
        if all(c % p == 0 for c in u):
            continue
        if find_tangency(F, u, p, k_max) is not None:
            out.append(p)
    return out


def dual_degree(m: int, d: int, e: int, n: int) -> int:
    D = m * d * e
    return D * (D - 1) ** (n - 1)


def gram_matrix(H: SparsePoly) -> list[list[int]]:
    """Integer matrix 2A of a quadratic form H = v^T A v."""
    if H.degree() != 2 or not H.is_homogeneous():
        raise ValueError("not a quadratic form")
    N = len(H.variables)
    G = [[0] * N for _ in range(N)]
    for mono, c in H.items():
        idx = [i for i, e in enumerate(mono) for _ in range(e)]
        i, j = idx
        if i == j:
            G[i][i] += 2 * c
        else:
            G[i][j] += c
            G[j][i] += c
    return G


def quadric_dual(F: StructuredF) -> SparsePoly:
    """Dual form in (UY, U1..Un): adjugate of the Gram matrix, made primitive."""
    if F.degree != 2:
        raise ValueError(f"closed form only for mde = 2, got {F.degree}")
    G = gram_matrix(unweighted_form(F))
    N = len(G)
    if bareiss_det(G) == 0:
        raise ValueError("degenerate quadratic form")
    adj = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(N):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(G) if r != i]
            adj[j][i] = (-1) ** (i + j) * (bareiss_det(minor) if minor else 1)
    variables = ("UY",) + tuple(f"U{i}" for i in range(1, F.n + 1))
    terms = {}
    for i in range(N):
        for j in range(N):
            mono = [0] * N
            mono[i] += 1
            mono[j] += 1
            terms[tuple(mono)] = terms.get(tuple(mono), 0) + adj[i][j]
    out = SparsePoly(variables, terms)
    g = out.content()
    lead = out.leading_term()[1]
    sign = 1 if lead > 0 else -1
    return SparsePoly(variables, {m: sign * c // g for m, c in out.items()})


def dual_at_zero(G: SparsePoly, u: Sequence[int]) -> int:
    return G.eval_int([0] + [int(c) for c in u])


def census_probes(F: StructuredF, R: int, k_max: int = 2, minimum: int = 3) -> list[int]:
    """Odd good primes whose product exceeds max |G(0,u)| on [-R, R]^n (quadrics).

    With that many probes, u is bad or zero at every probe exactly when
    G(0, u) = 0, so the census counts the integer points of the dual cone.
    """
    G = quadric_dual(F)
    bound = sum(abs(c) for c in G.coeffs_in("UY").get(0, G).terms.values()) * R * R
    probes, prod, p = [], 1, 2
    while prod <= bound or len(probes) < minimum:
        p = nextprime(p)
        if smoothness_mod_p(F, p, k_max).smooth:
            probes.append(p)
            prod *= p
    return probes


def bad_locus_census(F: StructuredF, R: int, probe_primes: Sequence[int], k_max: int = 2) -> int:
    """Number of u in [-R, R]^n that are TypeZero or Bad at every probe prime."""
    probe_primes = list(probe_primes)
    if len(probe_primes) < 3:
        raise ValueError("at least 3 probe primes are required")
    if len(set(probe_primes)) != len(probe_primes):
        raise ValueError("probe primes must be distinct")
    for p in probe_primes:
        if p == 2 or not smoothness_mod_p(F, p, k_max).smooth:
            raise BadReductionError(f"probe {p} is not an odd prime of good reduction")
    tables = [bad_or_zero_table(F, p, k_max) for p in probe_primes]
    coords = np.arange(-R, R + 1)
    n = F.n
    total = 0
    # slabs over the first coordinate keep memory bounded
    for u1 in coords:
        mask = None
        for p, tab in zip(probe_primes, tables):
            idx = [np.array([u1 % p])] + [coords % p] * (n - 1)
            sub = tab[np.ix_(*idx)]
            mask = sub if mask is None else mask & sub
        total += int(mask.sum())
    return total


def census_envelope_exponent(n: int) -> float:
    if n < 3:
        raise ValueError("the envelope exponent needs n >= 3")
    return n - 2 + 1 / 3


def log_height(F: StructuredF, u: Sequence[int]) -> float:
    return math.log(F.height() * max(abs(int(c)) for c in u))
