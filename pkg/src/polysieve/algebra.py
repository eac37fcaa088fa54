"""Exact polynomial arithmetic over the integers and over finite fields.

Finite field elements are carried around as integers: the element
``c_0 + c_1 t + ... + c_{k-1} t^{k-1}`` of ``F_p[t]/(modulus)`` is encoded as
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.  Constants of the prime field keep
their usual residue, so an integer coefficient reduced mod p is already a
valid encoding.  :class:`FieldElem` wraps an encoding for callers that want
operator syntax.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import factorint, isprime


class DimensionError(ValueError):
    pass


class UnknownVariable(KeyError):
    pass


class ZeroPolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# finite fields


def _pmod_poly(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a by the monic polynomial m, coefficients low to high."""
    a = [c % p for c in a]
    k = len(m) - 1
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i]
        if c:
            for j in range(k + 1):
                a[i - k + j] = (a[i - k + j] - c * m[j]) % p
    del a[k:]
    a.extend([0] * (k - len(a)))
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pmod_poly(prod, m, p)


def _has_factor_of_degree(m: Sequence[int], deg: int, p: int) -> bool:
    for tail in itertools.product(range(p), repeat=deg):
        cand = list(tail) + [1]
        if not any(_pmod_poly(list(m), cand, p)):
            return True
    return False


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial factorization; only meant for the small degrees used here."""
    k = len(modulus) - 1
    if k < 1:
        return False
    return not any(_has_factor_of_degree(modulus, d, p) for d in range(1, k // 2 + 1))


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k with the smallest encoding sum c_i p^i."""
    if k == 1:
        return (0, 1)
    for code in range(p**k):
        tail = [(code // p**i) % p for i in range(k)]
        cand = tuple(tail) + (1,)
        if tail[0] and is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldDesc:
    """The field F_{p^k} = F_p[t]/(modulus); modulus is monic, low to high."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1 or len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if self.k > 1 and not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible mod {self.p}")

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self):
        return f"F_{self.p}" if self.k == 1 else f"F_{self.p}^{self.k}"

    # encodings

    def encode(self, coeffs: Sequence[int]) -> int:
        coeffs = _pmod_poly(list(coeffs), self.modulus, self.p) if len(coeffs) > self.k else coeffs
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def decode(self, x: int) -> tuple[int, ...]:
        return tuple((x // self.p**i) % self.p for i in range(self.k))

    def from_int(self, c: int) -> int:
        return c % self.p

    def elem(self, x: int | Sequence[int]) -> "FieldElem":
        if isinstance(x, (int, np.integer)):
            return FieldElem(self, self.decode(int(x) % self.q) if self.k > 1 else (int(x) % self.p,))
        return FieldElem(self, self.decode(self.encode(x)))

    # scalar arithmetic on encodings

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        out, w = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.k == 1:
            return -a % p
        out, w = 0, 1
        for _ in range(self.k):
            out += (-(a % p) % p) * w
            a //= p
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = _tables(self)
        return int(t.exp[t.log[a] + t.log[b]])

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        t = _tables(self)
        return int(t.exp[(self.q - 1 - t.log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if self.k == 1:
            if e < 0:
                return pow(self.inv(a), -e, self.p)
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        t = _tables(self)
        return int(t.exp[(t.log[a] * e) % (self.q - 1)])

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        for r in factorint(n):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    # vectorized arithmetic on arrays of encodings

    def vadd(self, a, b):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * w
            a = a // p
            b = b // p
            w *= p
        return out

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        t = _tables(self)
        return t.exp[t.log[a] + t.log[b]]

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            out = np.ones_like(a)
            base = a % self.p
            while e:
                if e & 1:
                    out = out * base % self.p
                base = base * base % self.p
                e >>= 1
            return out
        if e == 0:
            return np.ones_like(a)
        t = _tables(self)
        lg = t.log[a]
        out = t.exp[(lg % (self.q - 1)) * e % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def power_table(self, e: int) -> np.ndarray:
        """x**e for every element x, cached."""
        return _power_table(self, e)


@dataclass(frozen=True)
class _Tables:
    log: np.ndarray
    exp: np.ndarray
    generator: int


@functools.cache
def _tables(fd: FieldDesc) -> _Tables:
    q, p, k = fd.q, fd.p, fd.k

    def mul_slow(a, b):
        return fd.encode(_poly_mulmod(fd.decode(a), fd.decode(b), fd.modulus, p))

    primes = list(factorint(q - 1))
    gen = None
    for cand in range(2 if k == 1 else p, q):
        ok = True
        for r in primes:
            x, acc, e = cand, 1, (q - 1) // r
            while e:
                if e & 1:
                    acc = mul_slow(acc, x)
                x = mul_slow(x, x)
                e >>= 1
            if acc == 1:
                ok = False
                break
        if ok:
            gen = cand
            break
    if gen is None:
        gen = 1  # q == 2
    # log[0] is a sentinel pointing into the zero tail of exp
    sentinel = 2 * q
    exp = np.zeros(4 * q + 2, dtype=np.int64)
    log = np.full(q, sentinel, dtype=np.int64)
    x = 1
    for i in range(q - 1):
        exp[i] = x
        exp[i + q - 1] = x
        log[x] = i
        x = mul_slow(x, gen)
    return _Tables(log=log, exp=exp, generator=gen)


@functools.cache
def _power_table(fd: FieldDesc, e: int) -> np.ndarray:
    out = fd.vpow(fd.elements(), e)
    out.setflags(write=False)
    return out


@functools.cache
def field(p: int, k: int = 1) -> FieldDesc:
    """F_{p^k} built on the least irreducible modulus, so runs are reproducible."""
    return FieldDesc(p, k, least_irreducible(p, k))


@dataclass(frozen=True)
class FieldElem:
    desc: FieldDesc
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.desc.k or any(not 0 <= c < self.desc.p for c in self.coeffs):
            raise ValueError("coefficients must be a reduced k-vector")

    @property
    def code(self) -> int:
        return self.desc.encode(self.coeffs)

    def _wrap(self, x: int) -> "FieldElem":
        return FieldElem(self.desc, self.desc.decode(x))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.desc != self.desc:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.desc.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.desc.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.desc.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.desc.sub(b, self.code))

    def __neg__(self):
        return self._wrap(self.desc.neg(self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.desc.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.desc.mul(self.code, self.desc.inv(b)))

    def __pow__(self, e: int):
        return self._wrap(self.desc.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.desc.p and all(c == 0 for c in self.coeffs[1:])
        if isinstance(other, FieldElem):
            return self.desc == other.desc and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.desc, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        if self.desc.k == 1:
            return f"{self.coeffs[0]} (mod {self.desc.p})"
        parts = [f"{c}" if i == 0 else f"{c}t^{i}" for i, c in enumerate(self.coeffs) if c]
        return (" + ".join(parts) or "0") + f" in {self.desc!r}"


def primitive_root_of_unity(p: int, f: int) -> FieldElem:
    """Least residue of exact multiplicative order f in F_p."""
    if f < 1 or (p - 1) % f:
        raise ValueError(f"{f} does not divide {p}-1")
    fd = field(p)
    for a in range(1, p):
        if fd.order(a) == f:
            return fd.elem(a)
    raise AssertionError("unreachable: F_p^x is cyclic")


# ---------------------------------------------------------------------------
# sparse polynomials

Monomial = tuple[int, ...]


class SparsePoly:
    """Immutable sparse polynomial.

    ``terms`` maps exponent vectors (ordered like ``variables``) to nonzero
    coefficients: Python ints when ``field`` is None, field encodings otherwise.
    """

    __slots__ = ("variables", "_terms", "field", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, int] | Iterable = (),
                 field: FieldDesc | None = None):
        self.variables = tuple(variables)
        self.field = field
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        nv = len(self.variables)
        clean: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != nv or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono}")
            if field is not None:
                c = int(c) % field.q
                prev = clean.get(mono)
                if prev is not None:
                    c = field.add(prev, c)
            else:
                c = int(c) + clean.get(mono, 0)
            clean[mono] = c
        self._terms = {m: c for m, c in clean.items() if c != 0}
        self._hash = None

    # construction helpers

    @classmethod
    def _raw(cls, variables, terms, field):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj._terms = terms
        obj.field = field
        obj._hash = None
        return obj

    @classmethod
    def gens(cls, variables: Sequence[str], field: FieldDesc | None = None) -> list["SparsePoly"]:
        nv = len(variables)
        return [cls(variables, {tuple(int(i == j) for j in range(nv)): 1}, field) for i in range(nv)]

    @classmethod
    def const(cls, variables: Sequence[str], c: int, field: FieldDesc | None = None) -> "SparsePoly":
        return cls(variables, {(0,) * len(variables): c}, field)

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def constant_value(self) -> int | None:
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            if not any(m):
                return c
        return None

    # ring plumbing

    def _check(self, other: "SparsePoly"):
        if other.variables != self.variables or other.field != self.field:
            raise DimensionError(f"incompatible polynomials: {self.variables}/{self.field} vs "
                             f"{other.variables}/{other.field}")

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return SparsePoly.const(self.variables, int(other), self.field)
        if isinstance(other, FieldElem) and self.field == other.desc:
            return SparsePoly.const(self.variables, other.code, self.field)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def _cadd(self, a, b):
        return a + b if self.field is None else self.field.add(a, b)

    def _cmul(self, a, b):
        return a * b if self.field is None else self.field.mul(a, b)

    def _cneg(self, a):
        return -a if self.field is None else self.field.neg(a)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            v = c if v is None else self._cadd(v, c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return SparsePoly._raw(self.variables, out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.variables, {m: self._cneg(c) for m, c in self._terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[Monomial, int] = {}
        fd = self.field
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2 if fd is None else fd.mul(c1, c2)
                v = out.get(m)
                out[m] = c if v is None else (v + c if fd is None else fd.add(v, c))
        return SparsePoly._raw(self.variables, {m: c for m, c in out.items() if c}, fd)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = SparsePoly.const(self.variables, 1, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self == self._lift(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (self.variables == other.variables and self.field == other.field
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, self.field, frozenset(self._terms.items())))
        return self._hash

    def scale(self, c: int) -> "SparsePoly":
        return self * c

    # structure

    def var_index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariable(var) from None

    def degree(self, var: str | None = None) -> int:
        """Degree in var, or total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        i = self.var_index(var)
        return max(m[i] for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def norm(self) -> int:
        """Largest absolute coefficient (integer polynomials)."""
        if self.field is not None:
            raise TypeError("height is only defined over the integers")
        return max((abs(c) for c in self._terms.values()), default=0)

    def content(self) -> int:
        if self.field is not None:
            raise TypeError("content is only defined over the integers")
        return math.gcd(*self._terms.values()) if self._terms else 0

    def leading_term(self) -> tuple[Monomial, int]:
        m = max(self._terms)
        return m, self._terms[m]

    def with_variables(self, variables: Sequence[str]) -> "SparsePoly":
        """Re-express over another variable list containing every used variable."""
        variables = tuple(variables)
        pos = []
        for i, v in enumerate(self.variables):
            if v in variables:
                pos.append((i, variables.index(v)))
            elif any(m[i] for m in self._terms):
                raise ValueError(f"variable {v} is used but not in the target list")
        out = {}
        for m, c in self._terms.items():
            nm = [0] * len(variables)
            for i, j in pos:
                nm[j] = m[i]
            out[tuple(nm)] = c
        return SparsePoly._raw(variables, out, self.field)

    def reduce(self, fd: FieldDesc) -> "SparsePoly":
        """Map an integer polynomial into F_q[variables]."""
        if self.field is not None:
            if self.field == fd:
                return self
            if self.field.p == fd.p and self.field.k == 1:
                return SparsePoly(self.variables, self._terms, fd)
            raise ValueError("can only reduce integer or prime-field polynomials")
        return SparsePoly(self.variables, {m: c % fd.p for m, c in self._terms.items()}, fd)

    def partial(self, var: str) -> "SparsePoly":
        i = self.var_index(var)
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                nm = m[:i] + (m[i] - 1,) + m[i + 1:]
                c = c * m[i] if self.field is None else self.field.mul(c, m[i] % self.field.p)
                if c:
                    out[nm] = c
        return SparsePoly._raw(self.variables, out, self.field)

    def coeffs_in(self, var: str) -> dict[int, "SparsePoly"]:
        """Write self as sum_j c_j(other vars) * var^j; returns {j: c_j}."""
        i = self.var_index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        buckets: dict[int, dict] = {}
        for m, c in self._terms.items():
            buckets.setdefault(m[i], {})[m[:i] + m[i + 1:]] = c
        return {j: SparsePoly._raw(rest, t, self.field) for j, t in buckets.items()}

    def substitute(self, mapping: Mapping[str, "SparsePoly | int"]) -> "SparsePoly":
        """Simultaneously replace variables by polynomials in the same ring.

        Replacement polynomials must share this polynomial's variable list;
        integers are accepted as constants.
        """
        idx = {self.var_index(v): self._lift(p) for v, p in mapping.items()}
        powers: dict[tuple[int, int], SparsePoly] = {}

        def pw(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = idx[i] ** e
            return powers[key]

        result = SparsePoly._raw(self.variables, {}, self.field)
        for m, c in self._terms.items():
            kept = tuple(0 if i in idx else e for i, e in enumerate(m))
            term = SparsePoly._raw(self.variables, {kept: c}, self.field)
            for i, e in enumerate(m):
                if i in idx and e:
                    term = term * pw(i, e)
            result = result + term
        return result

    def eval_int(self, point: Sequence[int]) -> int:
        if len(point) != len(self.variables):
            raise DimensionError(f"expected {len(self.variables)} coordinates, got {len(point)}")
        if self.field is not None:
            raise TypeError("use poly_eval for field coefficients")
        total = 0
        for m, c in self._terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t *= x**e
            total += t
        return total

    def eval_codes(self, point: Sequence[int], fd: FieldDesc) -> int:
        """Evaluate at a point given as field encodings, result as an encoding."""
        if len(point) != len(self.variables):
            raise DimensionError(f"expected {len(self.variables)} coordinates, got {len(point)}")
        if self.field is not None and self.field != fd:
            if not (self.field.p == fd.p and self.field.k == 1):
                raise ValueError("coefficient field does not embed in the evaluation field")
        total = 0
        for m, c in self._terms.items():
            t = c % fd.p if self.field is None else c
            for x, e in zip(point, m):
                if e:
                    t = fd.mul(t, fd.pow(x, e))
            total = fd.add(total, t)
        return total

    def eval_grid(self, arrays: Sequence[np.ndarray], fd: FieldDesc) -> np.ndarray:
        """Vectorized evaluation at broadcastable arrays of encodings."""
        shape = np.broadcast(*arrays).shape if arrays else ()
        total = np.zeros(shape, dtype=np.int64)
        for m, c in self._terms.items():
            t = np.full(shape, c % fd.p if self.field is None else c, dtype=np.int64)
            for x, e in zip(arrays, m):
                if e:
                    t = fd.vmul(t, fd.vpow(x, e))
            total = fd.vadd(total, t)
        return total

    def exquo(self, other: "SparsePoly") -> "SparsePoly":
        """Exact quotient self / other; raises ArithmeticError if inexact."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        fd = self.field
        lm, lc = other.leading_term()
        lc_inv = fd.inv(lc) if fd is not None else None
        rem = dict(self._terms)
        quot: dict[Monomial, int] = {}
        while rem:
            m = max(rem)
            c = rem[m]
            if any(a < b for a, b in zip(m, lm)):
                raise ArithmeticError("inexact polynomial division")
            qm = tuple(a - b for a, b in zip(m, lm))
            if fd is None:
                qc, r = divmod(c, lc)
                if r:
                    raise ArithmeticError("inexact polynomial division")
            else:
                qc = fd.mul(c, lc_inv)
            quot[qm] = qc
            for om, oc in other._terms.items():
                mm = tuple(a + b for a, b in zip(qm, om))
                v = rem.get(mm, 0)
                v = v - qc * oc if fd is None else fd.sub(v, fd.mul(qc, oc))
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return SparsePoly._raw(self.variables, quot, fd)

    # display

    def __repr__(self):
        return f"SparsePoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, reverse=True):
            c = self._terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e)
            if self.field is not None and self.field.k > 1:
                cs = f"[{c}]"
            else:
                cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_eval(f: SparsePoly, point: Sequence[FieldElem | int], fd: FieldDesc) -> FieldElem:
    """Exact value of f at point, reduced mod (p, modulus)."""
    if len(point) != len(f.variables):
        raise DimensionError(f"expected {len(f.variables)} coordinates, got {len(point)}")
    codes = [x.code if isinstance(x, FieldElem) else int(x) % fd.p for x in point]
    return fd.elem(f.eval_codes(codes, fd))


def partial_derivative(f: SparsePoly, var: str) -> SparsePoly:
    return f.partial(var)


def substitute_y_power(F: SparsePoly, alpha: FieldElem, e: int, y: str = "Y", z: str = "Z") -> SparsePoly:
    """F(alpha * Z^e, X) with coefficients in alpha's field; Z takes Y's slot."""
    i = F.var_index(y)
    fd = alpha.desc
    a = alpha.code
    variables = F.variables[:i] + (z,) + F.variables[i + 1:]
    out: dict[Monomial, int] = {}
    for m, c in F.items():
        c = c % fd.p if F.field is None else c
        c = fd.mul(c, fd.pow(a, m[i]))
        nm = m[:i] + (m[i] * e,) + m[i + 1:]
        out[nm] = fd.add(out.get(nm, 0), c)
    return SparsePoly(variables, out, fd)


# ---------------------------------------------------------------------------
# determinants and resultants


def bareiss_det(matrix: Sequence[Sequence], one=1):
    """Fraction-free determinant over an integral domain.

    Entries may be ints or SparsePoly; every division performed is exact.
    """
    n = len(matrix)
    if n == 0:
        return one
    M = [list(row) for row in matrix]
    if any(len(row) != n for row in M):
        raise DimensionError("determinant of a non-square matrix")
    sign = 1
    prev = one
    for k in range(n - 1):
        if not M[k][k]:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return M[k][k] * 0
        piv = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * piv - M[i][k] * M[k][j]
                M[i][j] = _exact_div(num, prev)
        prev = piv
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def _exact_div(a, b):
    if isinstance(a, SparsePoly):
        if isinstance(b, SparsePoly):
            c = b.constant_value()
            if c == 1:
                return a
            return a.exquo(b)
        if b == 1:
            return a
        return a.exquo(a._lift(b))
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("inexact integer division in Bareiss elimination")
    return q


def sylvester_matrix(g: SparsePoly, h: SparsePoly, var: str) -> list[list[SparsePoly]]:
    """Sylvester matrix in var, g-rows first, coefficients highest degree first."""
    g._check(h)
    cg, ch = g.coeffs_in(var), h.coeffs_in(var)
    dg, dh = g.degree(var), h.degree(var)
    rest = g.variables[:g.var_index(var)] + g.variables[g.var_index(var) + 1:]
    zero = SparsePoly._raw(rest, {}, g.field)
    size = dg + dh
    rows = []
    for shift in range(dh):
        row = [zero] * size
        for j in range(dg + 1):
            row[shift + j] = cg.get(dg - j, zero)
        rows.append(row)
    for shift in range(dg):
        row = [zero] * size
        for j in range(dh + 1):
            row[shift + j] = ch.get(dh - j, zero)
        rows.append(row)
    return rows


def resultant(g: SparsePoly, h: SparsePoly, var: str) -> SparsePoly:
    """Res_var(g, h) as the Sylvester determinant (g-rows first).

    A factor of var-degree 0 is allowed: Res(c, h) = c^deg(h).
    """
    if g.is_zero() or h.is_zero():
        raise ZeroPolynomialError("resultant with the zero polynomial")
    i = g.var_index(var)
    rest = g.variables[:i] + g.variables[i + 1:]
    dg, dh = g.degree(var), h.degree(var)
    if dg == 0 or dh == 0:
        c = (g if dg == 0 else h).coeffs_in(var)[0]
        return c ** (dh if dg == 0 else dg)
    one = SparsePoly.const(rest, 1, g.field)
    return bareiss_det(sylvester_matrix(g, h, var), one)


def sylvester_resultant_y(G: SparsePoly, H: SparsePoly, y: str = "Y") -> SparsePoly:
    """Res_Y(G, H) in the remaining variables; G and H need positive Y-degree."""
    if G.is_zero() or H.is_zero():
        raise ZeroPolynomialError("resultant with the zero polynomial")
    if G.degree(y) < 1 or H.degree(y) < 1:
        raise ValueError("both polynomials need positive degree in Y")
    return resultant(G, H, y)


# ---------------------------------------------------------------------------
# text format


def format_poly(f: SparsePoly) -> str:
    """Header ``vars v1 ... vn`` then one ``coefficient e1 ... en`` line per term."""
    lines = ["vars " + " ".join(f.variables)]
    for m in sorted(f._terms, reverse=True):
        lines.append(" ".join([str(f._terms[m])] + [str(e) for e in m]))
    return "\n".join(lines) + "\n"


def parse_polys(text: str) -> list[SparsePoly]:
    """Parse consecutive ``vars`` blocks; ``#`` starts a comment."""
    polys: list[SparsePoly] = []
    variables = None
    terms: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "vars":
            if variables is not None:
                polys.append(SparsePoly(variables, terms))
            variables, terms = tok[1:], []
            continue
        if variables is None:
            raise ValueError(f"line {lineno}: term before a 'vars' header")
        try:
            nums = [int(t) for t in tok]
        except ValueError:
            raise ValueError(f"line {lineno}: expected integers, got {line!r}") from None
        if len(nums) != len(variables) + 1:
            raise ValueError(f"line {lineno}: expected {len(variables) + 1} fields, got {len(nums)}")
        terms.append((tuple(nums[1:]), nums[0]))
    if variables is not None:
        polys.append(SparsePoly(variables, terms))
    return polys


def parse_poly(text: str) -> SparsePoly:
    polys = parse_polys(text)
    if len(polys) != 1:
        raise ValueError(f"expected one polynomial, found {len(polys)}")
    return polys[0]
