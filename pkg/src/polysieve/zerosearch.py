"""Common zeros of polynomial systems over a finite field.

The search builds an elimination tower with Sylvester resultants over the
coefficient field: level j holds polynomials in the first j variables whose
common zeros contain the projection of the full zero set.  Solutions are then
grown one coordinate at a time by evaluating the level-j system at every
element of the target field.  The tower is only ever used as a necessary
filter, and the top level is the original system, so every reported point is
an exact zero.
"""

from __future__ import annotations

import functools
from typing import Sequence

import numpy as np

from .algebra import FieldDesc, SparsePoly, field, resultant

# evaluation chunks are kept under this many field elements
_CHUNK = 1 << 21


class SearchLimitExceeded(RuntimeError):
    """The zero set is too large to enumerate under the configured limit."""


def _as_field_poly(f: SparsePoly, coeff_field: FieldDesc) -> SparsePoly:
    if f.field is None:
        return f.reduce(coeff_field)
    return f


def _drop_trivial(polys: list[SparsePoly]) -> list[SparsePoly] | None:
    """Remove zero polynomials; None signals a nonzero constant (no zeros)."""
    out = []
    seen = set()
    for f in polys:
        if f.is_zero():
            continue
        c = f.constant_value()
        if c is not None:
            return None
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def _complexity(f: SparsePoly, var: str):
    return (f.degree(var), len(f), f.degree())


def elimination_tower(polys: Sequence[SparsePoly], variables: Sequence[str]) -> list[list[SparsePoly]] | None:
    """levels[j] holds polynomials in variables[:j]; None if the system is inconsistent.

    All inputs must share ``variables`` and a prime-field coefficient ring.
    """
    variables = tuple(variables)
    cur = _drop_trivial([f.with_variables(variables) for f in polys])
    if cur is None:
        return None
    levels: list[list[SparsePoly]] = [[] for _ in range(len(variables) + 1)]
    levels[len(variables)] = cur
    for j in range(len(variables), 0, -1):
        var = variables[j - 1]
        rest = variables[: j - 1]
        involved = sorted((f for f in cur if f.degree(var) > 0), key=lambda f: _complexity(f, var))
        nxt = [f.with_variables(rest) for f in cur if f.degree(var) <= 0]
        if len(involved) >= 2:
            base = involved[0]
            res = [resultant(base, h, var) for h in involved[1:]]
            if all(r.is_zero() for r in res):
                # common factor with the simplest polynomial: try the other pairs
                res = [resultant(g, h, var) for i, g in enumerate(involved[1:], 1)
                       for h in involved[i + 1:]]
            nxt.extend(res)
        cleaned = _drop_trivial(nxt)
        if cleaned is None:
            return None
        levels[j - 1] = cleaned
        cur = cleaned
    return levels


class _Evaluator:
    """Evaluates several polynomials on one broadcast grid, sharing powers."""

    def __init__(self, arrays: Sequence[np.ndarray], fd: FieldDesc):
        self.arrays = arrays
        self.fd = fd
        self.shape = np.broadcast(*arrays).shape if arrays else ()
        self._pw: dict[tuple[int, int], np.ndarray] = {}

    def power(self, i: int, e: int) -> np.ndarray:
        key = (i, e)
        if key not in self._pw:
            self._pw[key] = self.fd.power_table(e)[self.arrays[i]]
        return self._pw[key]

    def __call__(self, f: SparsePoly) -> np.ndarray:
        fd = self.fd
        total = np.zeros(self.shape, dtype=np.int64)
        for mono, c in f.items():
            c = c % fd.p if f.field is None else c
            t = None
            for i, e in enumerate(mono):
                if e:
                    pw = self.power(i, e)
                    t = pw if t is None else fd.vmul(t, pw)
            if t is None:
                t = np.full(self.shape, c, dtype=np.int64)
            elif c != 1:
                t = fd.vmul(t, c)
            total = fd.vadd(total, t)
        return total


def evaluate_many(polys: Sequence[SparsePoly], arrays: Sequence[np.ndarray], fd: FieldDesc) -> list[np.ndarray]:
    ev = _Evaluator([np.asarray(a, dtype=np.int64) for a in arrays], fd)
    return [ev(f) for f in polys]


def affine_zeros(polys: Sequence[SparsePoly], variables: Sequence[str], fd: FieldDesc,
                 first_only: bool = False, limit: int = 10**7,
                 tower: list[list[SparsePoly]] | None = None) -> np.ndarray:
    """All common zeros in fd^r as an (m, r) array of encodings.

    ``tower`` may be passed in when the same system is searched over several
    fields.  With ``first_only`` the result has at most one row.
    """
    r = len(variables)
    if tower is None:
        tower = elimination_tower(polys, variables)
    if tower is None:
        return np.zeros((0, r), dtype=np.int64)
    elems = fd.elements()
    q = fd.q
    sols = np.zeros((1, 0), dtype=np.int64)
    for j in range(1, r + 1):
        level = tower[j]
        if not level and len(sols) * q > limit:
            raise SearchLimitExceeded(f"{len(sols)} partial solutions times {q} field elements")
        rows = max(1, _CHUNK // q)
        found = []
        for start in range(0, len(sols), rows):
            block = sols[start:start + rows]
            if level:
                arrays = [block[:, i][:, None] for i in range(j - 1)] + [elems[None, :]]
                mask = np.ones((len(block), q), dtype=bool)
                for val in evaluate_many(level, arrays, fd):
                    mask &= val == 0
                bi, xi = np.nonzero(mask)
            else:
                bi = np.repeat(np.arange(len(block)), q)
                xi = np.tile(np.arange(q), len(block))
            if len(bi):
                found.append(np.column_stack([block[bi], elems[xi]]))
                if first_only and j == r:
                    break
            if sum(len(f) for f in found) > limit:
                raise SearchLimitExceeded(f"more than {limit} partial solutions at level {j}")
        sols = np.concatenate(found) if found else np.zeros((0, j), dtype=np.int64)
        if not len(sols):
            return sols
    if first_only:
        sols = sols[:1]
    return sols


def _chart_poly(f: SparsePoly, j: int) -> SparsePoly | None:
    """Restrict to the chart v_0 = ... = v_{j-1} = 0, v_j = 1."""
    keep = f.variables[j + 1:]
    terms = {}
    for mono, c in f.items():
        if any(mono[:j]):
            continue
        terms[mono[j + 1:]] = c
    return SparsePoly(keep, terms, f.field)


def projective_zeros(polys: Sequence[SparsePoly], variables: Sequence[str], fd: FieldDesc,
                     first_only: bool = False, limit: int = 10**7,
                     coeff_field: FieldDesc | None = None) -> list[tuple[int, ...]]:
    """Normalized projective common zeros (first nonzero coordinate = 1) over fd."""
    variables = tuple(variables)
    cf = coeff_field or field(fd.p)
    polys = [_as_field_poly(f.with_variables(variables), cf) for f in polys]
    N = len(variables)
    out: list[tuple[int, ...]] = []
    for j in range(N):
        chart = [_chart_poly(f, j) for f in polys]
        sols = affine_zeros(chart, variables[j + 1:], fd, first_only=first_only, limit=limit)
        for row in sols:
            out.append((0,) * j + (1,) + tuple(int(x) for x in row))
            if first_only:
                return out
    return out


@functools.lru_cache(maxsize=4096)
def cached_tower(polys: tuple[SparsePoly, ...], variables: tuple[str, ...]):
    return elimination_tower(list(polys), variables)


def projective_zero_search(polys: Sequence[SparsePoly], variables: Sequence[str], p: int,
                           k_max: int, first_only: bool = True):
    """Search F_{p^k}, k = 1..k_max; returns (k, point codes) or None.

    The elimination towers are built once over F_p and reused for every k.
    """
    variables = tuple(variables)
    cf = field(p)
    polys = [_as_field_poly(f.with_variables(variables), cf) for f in polys]
    N = len(variables)
    charts = []
    for j in range(N):
        chart = tuple(_chart_poly(f, j) for f in polys)
        charts.append((j, chart, cached_tower(chart, variables[j + 1:])))
    for k in range(1, k_max + 1):
        fd = field(p, k)
        for j, chart, tower in charts:
            if tower is None:
                continue
            sols = affine_zeros(chart, variables[j + 1:], fd, first_only=first_only, tower=tower)
            if len(sols):
                return k, (0,) * j + (1,) + tuple(int(x) for x in sols[0])
    return None
