import itertools

import pytest

from polysieve import structured
from polysieve.algebra import SparsePoly, field
from polysieve.fixtures import fixture, resolve_instance
from polysieve.structured import (DegreeMismatch, MNotAtLeastTwo, ZeroLastForm, parse_structured,
                                  format_structured, singular_system, smoothness_mod_p, validate)

X3 = ("X1", "X2", "X3")


def quadric_form():
    x1, x2, x3 = SparsePoly.gens(X3)
    return -(x1**2 + x2**2 + x3**2)


def test_validate_accepts_fixture_shape():
    F = validate(2, 1, 1, 3, [quadric_form()])
    assert F.D == 2 and F.degree == 2 and F == fixture("F_A")


@pytest.mark.parametrize("args,err", [
    ((1, 1, 1, 3), MNotAtLeastTwo),
    ((2, 1, 2, 3), DegreeMismatch),
])
def test_validate_rejects(args, err):
    with pytest.raises(err):
        validate(*args, [quadric_form()])


def test_zero_last_form_rejected():
    with pytest.raises(ZeroLastForm):
        validate(2, 1, 1, 3, [SparsePoly(X3, {})])


@pytest.mark.parametrize("name", ["F_A", "F_B", "F_C", "F_D"])
def test_text_round_trip(name):
    F = fixture(name)
    assert parse_structured(format_structured(F)) == F


def test_missing_instance_file():
    with pytest.raises(FileNotFoundError):
        resolve_instance("/nonexistent/instance.txt")


def test_unweighted_form_is_homogeneous_of_full_degree():
    for name in ("F_A", "F_B", "F_C"):
        F = fixture(name)
        H = structured.unweighted_form(F)
        assert H.is_homogeneous() and H.degree() == F.degree


def brute_singular(F, p):
    """Projective singular points over F_p by exhaustive enumeration."""
    fd = field(p)
    system = [f.reduce(fd) for f in singular_system(F)]
    hits = []
    for pt in itertools.product(range(p), repeat=F.n + 1):
        lead = next((c for c in pt if c), None)
        if lead != 1:
            continue
        if all(f.eval_codes(pt, fd) == 0 for f in system):
            hits.append(pt)
    return hits


@pytest.mark.parametrize("name", ["F_A", "F_B", "F_C", "F_D", "F_sing"])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_smoothness_search_matches_enumeration_over_prime_field(name, p):
    F = fixture(name)
    cert = smoothness_mod_p(F, p, 1)
    assert cert.smooth == (not brute_singular(F, p))


def test_witness_is_singular():
    for F, p in ((fixture("F_A"), 2), (fixture("F_B"), 3), (fixture("F_sing"), 5)):
        cert = smoothness_mod_p(F, p)
        assert not cert.smooth
        fd = field(p, cert.witness_degree)
        assert all(f.eval_codes(cert.witness, fd) == 0 for f in singular_system(F))


def test_f_b_reduction():
    F = fixture("F_B")
    assert not smoothness_mod_p(F, 3).smooth
    assert all(smoothness_mod_p(F, p).smooth for p in (5, 7, 13))


def test_certificate_argument_checks():
    with pytest.raises(ValueError):
        structured.smooth_over_C_certificate(fixture("F_A"), [])
    with pytest.raises(ValueError):
        structured.smooth_over_C_certificate(fixture("F_A"), [2, 3])
