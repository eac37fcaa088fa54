import itertools

from hypothesis import given, settings, strategies as st

from polysieve.algebra import SparsePoly, field
from polysieve import zerosearch

V = ("Z", "X1", "X2")


def brute(polys, fd):
    out = []
    for pt in itertools.product(range(fd.q), repeat=3):
        if next((c for c in pt if c), None) != 1:
            continue
        if all(f.reduce(fd).eval_codes(pt, fd) == 0 for f in polys):
            out.append(pt)
    return sorted(out)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6), st.lists(st.integers(-2, 2), min_size=3, max_size=3),
       st.sampled_from([3, 5, 7]))
def test_projective_zeros_match_enumeration(quad, lin, p):
    z, x, y = SparsePoly.gens(V)
    monos = [z * z, z * x, z * y, x * x, x * y, y * y]
    f = sum((m * c for m, c in zip(monos, quad)), SparsePoly.const(V, 0))
    g = sum((m * c for m, c in zip((z, x, y), lin)), SparsePoly.const(V, 0))
    polys = [h for h in (f, g) if not h.is_zero()]
    if not polys:
        return
    fd = field(p)
    got = sorted(zerosearch.projective_zeros(polys, V, fd))
    assert got == brute(polys, fd)


def test_search_finds_point_over_extension():
    z, x, y = SparsePoly.gens(V)
    # x^2 + y^2 = 0 = z has no F_3 point but has one over F_9
    polys = [x * x + y * y, z]
    assert zerosearch.projective_zero_search(polys, V, 3, 1) is None
    k, pt = zerosearch.projective_zero_search(polys, V, 3, 2)
    fd = field(3, 2)
    assert k == 2 and all(f.reduce(fd).eval_codes(pt, fd) == 0 for f in polys)


def test_inconsistent_system():
    z, x, y = SparsePoly.gens(V)
    assert zerosearch.projective_zero_search([z, x, y], V, 5, 2) is None
