"""Coefficient reduction: either the solutions pin F's coefficients up to a
bounded integer multiple, or they lie on a second curve H with Res_Y(F, H) != 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from sympy import Matrix

from .algebra import SparsePoly, bareiss_det, resultant
from .counting import BoxSpec, integer_solutions, schwartz_zippel_count
from .structured import StructuredF

Vector = list[int]


@dataclass(frozen=True)
class MonomialSet:
    D: int
    e: int
    n: int
    monomials: tuple[tuple[int, ...], ...]  # (d_Y, d_1, ..., d_n)

    def __len__(self):
        return len(self.monomials)

    def index(self, mono: tuple[int, ...]) -> int:
        return self.monomials.index(mono)


def _compositions(total: int, parts: int):
    """Exponent vectors of length parts summing to total, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomial_set(D: int, e: int, n: int) -> MonomialSet:
    """All (d_Y, d) with d_Y e + sum d_i = D e, Y-degree descending."""
    if min(D, e, n) < 1:
        raise ValueError("D, e and n must be positive")
    monos = []
    for dy in range(D, -1, -1):
        for rest in _compositions((D - dy) * e, n):
            monos.append((dy,) + rest)
    return MonomialSet(D, e, n, tuple(monos))


def coefficient_vector(F: StructuredF, E: MonomialSet) -> Vector:
    P = F.polynomial()
    a = [0] * len(E)
    for mono, c in P.items():
        a[E.index(mono)] = c
    return a


def solution_matrix(solutions: Sequence[tuple[int, Sequence[int]]], E: MonomialSet) -> list[Vector]:
    """Rows of monomial values at each solution (y, x)."""
    if not solutions:
        raise ValueError("empty solution list")
    rows = []
    for y, x in solutions:
        pt = (int(y),) + tuple(int(v) for v in x)
        if len(pt) != E.n + 1:
            raise ValueError("solution has the wrong dimension")
        row = []
        for mono in E.monomials:
            v = 1
            for c, k in zip(pt, mono):
                if k:
                    v *= c**k
            row.append(v)
        rows.append(row)
    return rows


def mat_vec(C: Sequence[Sequence[int]], b: Sequence[int]) -> Vector:
    return [sum(c * x for c, x in zip(row, b)) for row in C]


def independent_rows(C: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a maximal independent set of rows, by fraction-free elimination."""
    if not C:
        return []
    ncols = len(C[0])
    basis: list[tuple[int, Vector]] = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in enumerate(C):
        r = list(row)
        for col, brow in basis:
            if r[col]:
                piv = brow[col]
                f = r[col]
                r = [piv * x - f * y for x, y in zip(r, brow)]
                g = math.gcd(*r)
                if g > 1:
                    r = [x // g for x in r]
        nz = next((j for j in range(ncols) if r[j]), None)
        if nz is not None:
            basis.append((nz, r))
            chosen.append(idx)
            if len(basis) == ncols:
                break
    return chosen


def exact_rank(C: Sequence[Sequence[int]]) -> int:
    return len(independent_rows(C))


def cofactor_null_vector(rows: Sequence[Sequence[int]]) -> Vector:
    """b_j = (-1)^j det(rows without column j) for an (r) x (r+1) integer matrix."""
    ncols = len(rows[0])
    if len(rows) != ncols - 1:
        raise ValueError("need exactly one fewer row than columns")
    b = []
    for j in range(ncols):
        minor = [row[:j] + row[j + 1:] for row in rows]
        b.append((-1) ** j * bareiss_det(minor))
    return b


def rank_and_nullvector(C: Sequence[Sequence[int]]):
    """(rank, b or None); b is the cofactor null vector when rank = columns - 1."""
    C = [list(map(int, row)) for row in C]
    ncols = len(C[0]) if C else 0
    rows = independent_rows(C)
    rank = len(rows)
    if rank != ncols - 1:
        return rank, None
    b = cofactor_null_vector([C[i] for i in rows])
    if any(mat_vec(C, b)):
        raise AssertionError("cofactor vector is not in the kernel")
    return rank, b


def integer_null_basis(C: Sequence[Sequence[int]]) -> list[Vector]:
    """Primitive integer basis of the rational kernel, in sympy's column order."""
    basis = []
    for v in Matrix(C).nullspace():
        fr = [Fraction(int(x.p), int(x.q)) for x in v]
        den = math.lcm(*(f.denominator for f in fr))
        ints = [int(f * den) for f in fr]
        g = math.gcd(*ints)
        basis.append([x // g for x in ints])
    return basis


def proportional(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


@dataclass
class ReduceDecision:
    kind: str  # "coeff_bounded" or "secondary_curve"
    E_size: int
    N: int
    rank: int | None = None
    b: Vector | None = None
    bound_check: bool | None = None
    trivial: bool = False
    H: SparsePoly | None = None
    R: SparsePoly | None = None
    zero_count: int | None = None
    certificate: dict = dc_field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return bool(self.certificate.get("verified"))


def _poly_from_vector(b: Sequence[int], E: MonomialSet) -> SparsePoly:
    variables = ("Y",) + tuple(f"X{i}" for i in range(1, E.n + 1))
    return SparsePoly(variables, {m: c for m, c in zip(E.monomials, b) if c})


def reduce_decision(F: StructuredF, B: int, solutions=None) -> ReduceDecision:
    """Run the dichotomy on the integer solutions of F in [-B, B]^n."""
    E = monomial_set(F.D, F.e, F.n)
    a = coefficient_vector(F, E)
    if solutions is None:
        solutions = integer_solutions(F, BoxSpec(B, F.n))
    N = len(solutions)
    if N < len(E):
        return ReduceDecision("coeff_bounded", len(E), N, b=a, bound_check=True, trivial=True,
                              certificate={"verified": True, "reason": "N < |E|"})
    C = solution_matrix(solutions, E)
    Ca_zero = not any(mat_vec(C, a))
    rank, b = rank_and_nullvector(C)
    if b is not None:
        max_entry = max(abs(x) for row in C for x in row)
        k = len(E) - 1
        hadamard = math.factorial(k) * max_entry**k
        stated = (2 * B) ** (F.D * F.e * k) * math.factorial(k)
        bmax = max(abs(x) for x in b)
        amax = max(abs(x) for x in a)
        ok = not any(mat_vec(C, b)) and proportional(a, b) and amax <= bmax <= hadamard
        return ReduceDecision("coeff_bounded", len(E), N, rank=rank, b=b, bound_check=ok,
                              certificate={"verified": ok and Ca_zero, "C_a_zero": Ca_zero,
                                           "C_b_zero": not any(mat_vec(C, b)),
                                           "b_proportional_to_a": proportional(a, b),
                                           "max_abs_b": bmax, "hadamard_bound": hadamard,
                                           "stated_bound": stated,
                                           "log_b_over_log_B": math.log(bmax) / math.log(B) if B > 1 else None})
    # rank <= |E| - 2: pick the first kernel vector not proportional to a
    hvec = next((v for v in integer_null_basis(C) if not proportional(a, v)), None)
    if hvec is None:
        raise AssertionError("kernel of dimension >= 2 must leave the span of a")
    G = F.polynomial()
    H = _poly_from_vector(hvec, E)
    R = resultant(G, H, "Y")
    on_H = all(H.eval_int((y,) + tuple(x)) == 0 for y, x in solutions)
    if R.is_zero():
        return ReduceDecision("secondary_curve", len(E), N, rank=rank, H=H, R=R,
                              certificate={"verified": False, "R_nonzero": False, "on_H": on_H})
    zc = schwartz_zippel_count(R, BoxSpec(B, F.n))
    sz_bound = max(R.degree(), 0) * (2 * B + 1) ** (F.n - 1)
    ok = on_H and zc <= sz_bound and Ca_zero
    return ReduceDecision("secondary_curve", len(E), N, rank=rank, H=H, R=R, zero_count=zc,
                          certificate={"verified": ok, "R_nonzero": True, "on_H": on_H,
                                       "C_a_zero": Ca_zero, "zero_count": zc,
                                       "schwartz_zippel_bound": sz_bound,
                                       "zeros_over_B^(n-1)": zc / max(B, 1) ** (F.n - 1)})
