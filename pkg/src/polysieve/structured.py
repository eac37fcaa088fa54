"""Structured polynomials Y^{md} + sum_i Y^{m(d-i)} f_i(X) and their reductions."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from sympy import isprime

from .algebra import FieldDesc, SparsePoly, field, parse_polys
from .zerosearch import projective_zero_search


class StructureError(ValueError):
    pass


class DegreeMismatch(StructureError):
    pass


class ZeroLastForm(StructureError):
    pass


class MNotAtLeastTwo(StructureError):
    pass


def x_names(n: int) -> tuple[str, ...]:
    return tuple(f"X{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class StructuredF:
    m: int
    d: int
    e: int
    n: int
    forms: tuple[SparsePoly, ...]
    name: str = dc_field(default="", compare=False)

    @property
    def D(self) -> int:
        """Degree in Y."""
        return self.m * self.d

    @property
    def degree(self) -> int:
        """Degree of the unweighted form F(Z^e, X)."""
        return self.m * self.d * self.e

    @property
    def xvars(self) -> tuple[str, ...]:
        return x_names(self.n)

    @property
    def last_form(self) -> SparsePoly:
        return self.forms[-1]

    def polynomial(self) -> SparsePoly:
        """F as a SparsePoly in (Y, X1..Xn)."""
        return _polynomial(self)

    def height(self) -> int:
        """Largest absolute coefficient of F."""
        return max(1, max(f.norm() for f in self.forms))

    def y_coefficients(self, x: Sequence[int]) -> list[int]:
        """Coefficients of F(Y, x) in Y from the top: index j multiplies Y^{md-j}."""
        coeffs = [0] * (self.D + 1)
        coeffs[0] = 1
        for i, f in enumerate(self.forms, 1):
            coeffs[self.m * i] = f.eval_int(x)
        return coeffs

    def __str__(self):
        return self.name or f"F(m={self.m},d={self.d},e={self.e},n={self.n})"


@functools.cache
def _polynomial(F: StructuredF) -> SparsePoly:
    variables = ("Y",) + F.xvars
    terms = {(F.D,) + (0,) * F.n: 1}
    out = SparsePoly(variables, terms)
    for i, f in enumerate(F.forms, 1):
        ypow = F.m * (F.d - i)
        lifted = SparsePoly(variables, {(ypow,) + mono: c for mono, c in f.items()})
        out = out + lifted
    return out


def validate(m: int, d: int, e: int, n: int, forms: Sequence, name: str = "") -> StructuredF:
    """Check the shape invariants and build a StructuredF.

    ``forms`` holds f_1..f_d, each a SparsePoly or an iterable of
    (exponent vector, coefficient) pairs over X1..Xn.
    """
    if m < 2:
        raise MNotAtLeastTwo(f"m = {m}; the structure needs m >= 2")
    if d < 1 or e < 1 or n < 1:
        raise StructureError("d, e and n must be positive")
    if len(forms) != d:
        raise StructureError(f"expected {d} forms, got {len(forms)}")
    xv = x_names(n)
    clean = []
    for i, f in enumerate(forms, 1):
        if not isinstance(f, SparsePoly):
            f = SparsePoly(xv, f)
        if f.field is not None:
            raise StructureError("forms must have integer coefficients")
        f = f.with_variables(xv)
        want = m * e * i
        if not f.is_zero() and (not f.is_homogeneous() or f.degree() != want):
            raise DegreeMismatch(f"f_{i} must be homogeneous of degree {want}")
        clean.append(f)
    if clean[-1].is_zero():
        raise ZeroLastForm(f"f_{d} is identically zero")
    return StructuredF(m, d, e, n, tuple(clean), name)


def unweighted_form(F: StructuredF) -> SparsePoly:
    """F(Z^e, X), homogeneous of degree mde in (Z, X1..Xn)."""
    return _unweighted(F)


@functools.cache
def _unweighted(F: StructuredF) -> SparsePoly:
    P = F.polynomial()
    variables = ("Z",) + F.xvars
    return SparsePoly(variables, {(mono[0] * F.e,) + mono[1:]: c for mono, c in P.items()})


# ---------------------------------------------------------------------------
# text format


def parse_structured(text: str, name: str = "") -> StructuredF:
    """Header ``m d e n`` followed by one ``vars`` block per form."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    body_start = None
    header = None
    for i, ln in enumerate(lines):
        if ln:
            header = ln.split()
            body_start = i + 1
            break
    if header is None or len(header) != 4:
        raise ValueError("missing 'm d e n' header")
    try:
        m, d, e, n = (int(t) for t in header)
    except ValueError:
        raise ValueError(f"bad header {' '.join(header)!r}") from None
    forms = parse_polys("\n".join(lines[body_start:]))
    return validate(m, d, e, n, forms, name)


def format_structured(F: StructuredF) -> str:
    from .algebra import format_poly
    out = [f"{F.m} {F.d} {F.e} {F.n}"]
    for f in F.forms:
        out.append(format_poly(f).rstrip("\n"))
    return "\n".join(out) + "\n"


def load_structured(path: str | Path) -> StructuredF:
    path = Path(path)
    return parse_structured(path.read_text(), name=path.stem)


# ---------------------------------------------------------------------------
# good reduction


@dataclass(frozen=True)
class GoodReductionCert:
    p: int
    k_searched: int
    verdict: str  # "smooth" or "singular"
    witness: tuple[int, ...] | None = None  # encodings in F_{p^k}
    witness_degree: int | None = None

    @property
    def smooth(self) -> bool:
        return self.verdict == "smooth"

    def witness_elems(self):
        if self.witness is None:
            return None
        fd = field(self.p, self.witness_degree)
        return tuple(fd.elem(c) for c in self.witness)


def singular_system(F: StructuredF) -> list[SparsePoly]:
    H = unweighted_form(F)
    return [H] + [H.partial(v) for v in H.variables]


def smoothness_mod_p(F: StructuredF, p: int, k_max: int = 2) -> GoodReductionCert:
    """Search for a singular point of F(Z^e, X) = 0 over F_{p^k}, k <= k_max."""
    return _smoothness(F, p, k_max)


@functools.cache
def _smoothness(F: StructuredF, p: int, k_max: int) -> GoodReductionCert:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    system = singular_system(F)
    variables = system[0].variables
    # monotone in k_max: reuse a smaller search if it already found a witness
    hit = projective_zero_search(system, variables, p, k_max)
    if hit is None:
        return GoodReductionCert(p, k_max, "smooth")
    k, point = hit
    fd = field(p, k)
    if any(f.eval_codes(point, fd) for f in system):
        raise AssertionError("singular witness failed re-evaluation")
    return GoodReductionCert(p, k_max, "singular", point, k)


def smooth_over_C_certificate(F: StructuredF, trial_primes: Sequence[int], k_max: int = 2):
    """(True, p) for the first odd trial prime with smooth reduction, else (False, None).

    A singular variety over C reduces to a singular one at every prime, so a
    single smooth reduction certifies smoothness over C.
    """
    if not trial_primes:
        raise ValueError("empty list of trial primes")
    for p in trial_primes:
        if p == 2:
            raise ValueError("p = 2 is excluded from certification")
        if smoothness_mod_p(F, p, k_max).smooth:
            return True, p
    return False, None


def bad_reduction_primes(F: StructuredF, bound: int, k_max: int = 2) -> list[int]:
    """Primes p <= bound (including 2) where the reduction is singular."""
    from sympy import primerange
    return [p for p in primerange(2, bound + 1) if not smoothness_mod_p(F, p, k_max).smooth]
