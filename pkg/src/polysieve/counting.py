"""Exact counters: N(F,B), the smoothed count S(F,B), fiber counts, point sets."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy import divisors, factorint

from .algebra import FieldDesc, SparsePoly, field
from .structured import StructuredF
from .weights import SmoothWeightSpec, weight_grid_1d
from .zerosearch import evaluate_many, projective_zeros

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class BoxSpec:
    B: int
    n: int

    def __post_init__(self):
        if self.B < 0:
            raise ValueError("box half-width must be non-negative")
        if self.n < 1:
            raise ValueError("dimension must be positive")

    @property
    def size(self) -> int:
        return (2 * self.B + 1) ** self.n


# ---------------------------------------------------------------------------
# integer evaluation on boxes


def _magnitude_bound(f: SparsePoly, R: int) -> int:
    return sum(abs(c) * R ** sum(m) for m, c in f.items())


def int_eval_grid(f: SparsePoly, R: int) -> np.ndarray:
    """f at every point of [-R, R]^n, axis i indexed by x_i + R."""
    n = len(f.variables)
    coords = np.arange(-R, R + 1)
    safe = _magnitude_bound(f, R) < _INT64_SAFE
    dtype = np.int64 if safe else object
    axes = []
    for i in range(n):
        shape = [1] * n
        shape[i] = len(coords)
        axes.append(coords.astype(dtype).reshape(shape))
    total = np.zeros((len(coords),) * n, dtype=dtype)
    for mono, c in f.items():
        t = np.full((1,) * n, c, dtype=dtype)
        for ax, e in zip(axes, mono):
            if e:
                t = t * ax**e
        total = total + t
    return total


# ---------------------------------------------------------------------------
# integer roots in Y


def integer_roots(coeffs: Sequence[int]) -> list[int]:
    """Distinct integer roots of a monic polynomial, coefficients from the top."""
    coeffs = list(coeffs)
    roots = []
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        if not roots:
            roots.append(0)
    if len(coeffs) == 1:
        return roots
    c = abs(coeffs[-1])
    for dv in divisors(c):
        for y in (dv, -dv):
            v = 0
            for a in coeffs:
                v = v * y + a
            if v == 0:
                roots.append(y)
    return sorted(roots)


def has_integer_root(coeffs: Sequence[int]) -> bool:
    return bool(integer_roots(coeffs))


@functools.cache
def _root_lookup(F: StructuredF, values: tuple[int, ...]) -> tuple[int, ...]:
    coeffs = [0] * (F.D + 1)
    coeffs[0] = 1
    for i, v in enumerate(values, 1):
        coeffs[F.m * i] = v
    return tuple(integer_roots(coeffs))


@dataclass(frozen=True)
class BoxData:
    R: int
    forms: tuple  # arrays f_i(x) over [-R, R]^n
    solvable: np.ndarray  # F(Y, x) has an integer root


@functools.lru_cache(maxsize=64)
def box_data(F: StructuredF, R: int) -> BoxData:
    forms = tuple(int_eval_grid(f, R) for f in F.forms)
    stacked = np.stack([a.ravel() for a in forms], axis=1)
    if stacked.dtype == object:
        keys, inv = _unique_rows_object(stacked)
    else:
        keys, inv = np.unique(stacked, axis=0, return_inverse=True)
    ok = np.array([bool(_root_lookup(F, tuple(int(v) for v in row))) for row in keys])
    solvable = ok[np.asarray(inv).ravel()].reshape(forms[0].shape)
    return BoxData(R, forms, solvable)


def _unique_rows_object(rows):
    index = {}
    inv = np.empty(len(rows), dtype=np.int64)
    keys = []
    for i, row in enumerate(rows):
        key = tuple(int(v) for v in row)
        j = index.get(key)
        if j is None:
            j = index[key] = len(keys)
            keys.append(key)
        inv[i] = j
    return keys, inv


def count_N(F: StructuredF, box: BoxSpec | int) -> int:
    """Number of x in [-B, B]^n such that F(Y, x) has an integer root."""
    box = _as_box(F, box)
    return int(box_data(F, box.B).solvable.sum())


def count_N_scan(F: StructuredF, box: BoxSpec | int) -> int:
    """Reference count: scan every |y| up to the Cauchy root bound."""
    box = _as_box(F, box)
    total = 0
    rng = range(-box.B, box.B + 1)
    for x in _product(rng, F.n):
        coeffs = F.y_coefficients(x)
        bound = 1 + max(abs(c) for c in coeffs[1:])
        for y in range(-bound, bound + 1):
            v = 0
            for a in coeffs:
                v = v * y + a
            if v == 0:
                total += 1
                break
    return total


def integer_solutions(F: StructuredF, box: BoxSpec | int) -> list[tuple[int, tuple[int, ...]]]:
    """Every (y, x) with x in the box and F(y, x) = 0, in lexicographic x order."""
    box = _as_box(F, box)
    out = []
    for x in _product(range(-box.B, box.B + 1), F.n):
        values = tuple(f.eval_int(x) for f in F.forms)
        for y in _root_lookup(F, values):
            out.append((y, tuple(x)))
    return out


def _product(rng, n):
    import itertools
    return itertools.product(rng, repeat=n)


def _as_box(F: StructuredF, box) -> BoxSpec:
    if isinstance(box, BoxSpec):
        if box.n != F.n:
            raise ValueError(f"box dimension {box.n} does not match n = {F.n}")
        return box
    return BoxSpec(int(box), F.n)


def weight_array(w: SmoothWeightSpec, n: int, R: int | None = None) -> np.ndarray:
    """W(x) on [-R, R]^n, R defaulting to the weight's integer support."""
    R = w.support if R is None else R
    one = weight_grid_1d(w, np.arange(-R, R + 1))
    out = one
    for _ in range(n - 1):
        out = np.multiply.outer(out, one)
    return out


def count_S(F: StructuredF, box: BoxSpec | int, w: SmoothWeightSpec | None = None) -> float:
    """Sum of W(k) over k with F(Y, k) solvable over Z (compensated summation)."""
    box = _as_box(F, box)
    w = w or SmoothWeightSpec(box.B)
    R = w.support
    data = box_data(F, R)
    W = weight_array(w, F.n, R)
    return math.fsum(W[data.solvable].tolist())


# ---------------------------------------------------------------------------
# fiber counts mod p


def nu_p(F: StructuredF, k: Sequence[int], p: int) -> int:
    """Number of distinct y in F_p with F(y, k) = 0."""
    if len(k) != F.n:
        raise ValueError(f"expected {F.n} coordinates, got {len(k)}")
    coeffs = [c % p for c in F.y_coefficients([int(v) for v in k])]
    count = 0
    for y in range(p):
        v = 0
        for a in coeffs:
            v = (v * y + a) % p
        count += v == 0
    return count


def form_grids(F: StructuredF, p: int) -> list[np.ndarray]:
    """f_i(a) mod p for every a in F_p^n, axis i indexed by a_i."""
    fd = field(p)
    n = F.n
    elems = np.arange(p, dtype=np.int64)
    arrays = []
    for i in range(n):
        shape = [1] * n
        shape[i] = p
        arrays.append(elems.reshape(shape))
    vals = evaluate_many([f.reduce(fd) for f in F.forms], arrays, fd)
    return [np.broadcast_to(v, (p,) * n) for v in vals]


def _root_count_from_values(F: StructuredF, p: int, values: Sequence[np.ndarray]) -> np.ndarray:
    """Number of y in F_p with y^{md} + sum_i y^{m(d-i)} v_i = 0, elementwise."""
    shape = np.broadcast(*values).shape
    d = F.d
    if p ** (d + 1) <= 1 << 25:
        # table over all coefficient tuples
        grids = np.indices((p,) * d, dtype=np.int64).reshape(d, -1)
        ys = np.arange(p, dtype=np.int64)
        table = np.zeros(grids.shape[1], dtype=np.int64)
        for y in ys:
            acc = np.full(grids.shape[1], pow(int(y), F.D, p), dtype=np.int64)
            for i in range(d):
                acc = (acc + pow(int(y), F.m * (d - 1 - i), p) * grids[i]) % p
            table += acc == 0
        idx = np.zeros(shape, dtype=np.int64)
        for v in values:
            idx = idx * p + v
        return table[idx]
    out = np.zeros(shape, dtype=np.int64)
    for y in range(p):
        acc = np.full(shape, pow(y, F.D, p), dtype=np.int64)
        for i, v in enumerate(values, 1):
            acc = (acc + pow(y, F.m * (F.d - i), p) * v) % p
        out += acc == 0
    return out


@functools.lru_cache(maxsize=128)
def nu_grid(F: StructuredF, p: int) -> np.ndarray:
    """nu_p(a) for every a in F_p^n (vectorized path)."""
    out = _root_count_from_values(F, p, form_grids(F, p))
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=32)
def nu_grid_scalar(F: StructuredF, p: int) -> np.ndarray:
    """nu_p(a) for every a in F_p^n, one scalar root count at a time."""
    out = np.zeros((p,) * F.n, dtype=np.int64)
    for a in np.ndindex(*out.shape):
        out[a] = nu_p(F, a, p)
    out.setflags(write=False)
    return out


def nu_on_box(F: StructuredF, p: int, R: int) -> np.ndarray:
    """nu_p(k) for k in [-R, R]^n by periodic lookup."""
    grid = nu_grid(F, p)
    idx = np.arange(-R, R + 1) % p
    return grid[np.ix_(*([idx] * F.n))]


# ---------------------------------------------------------------------------
# points and zeros


def projective_points(polys: Sequence[SparsePoly], fd: FieldDesc,
                      variables: Sequence[str] | int | None = None) -> list[tuple[int, ...]]:
    """Normalized representatives of the common projective zeros over fd.

    Points are tuples of field encodings.  ``variables`` is required when
    ``polys`` is empty (an int gives the number of coordinates).
    """
    polys = list(polys)
    if variables is None:
        if not polys:
            raise ValueError("variables are required for an empty system")
        variables = polys[0].variables
    elif isinstance(variables, int):
        variables = tuple(f"V{i}" for i in range(variables))
    for f in polys:
        if not f.is_homogeneous():
            raise ValueError(f"non-homogeneous input {f}")
    return projective_zeros(polys, tuple(variables), fd)


def schwartz_zippel_count(f: SparsePoly, box: BoxSpec | int) -> int:
    """Exact number of integer zeros of f in [-B, B]^n."""
    if f.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    B = box.B if isinstance(box, BoxSpec) else int(box)
    if isinstance(box, BoxSpec) and box.n != len(f.variables):
        raise ValueError("box dimension does not match the polynomial")
    vals = int_eval_grid(f, B)
    return int((vals == 0).sum())


def omega(N: int) -> int:
    """Number of distinct prime divisors of |N|."""
    if N == 0:
        raise ValueError("omega(0) is undefined")
    return len(factorint(abs(int(N))))
