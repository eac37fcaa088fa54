import random

import pytest
from hypothesis import given, settings, strategies as st

from polysieve import coeffreduce
from polysieve.counting import integer_solutions
from polysieve.fixtures import fixture


def test_monomial_set_sizes():
    assert len(coeffreduce.monomial_set(2, 1, 3)) == 10
    E = coeffreduce.monomial_set(2, 2, 3)
    assert len(E) == 22
    by_y = [sum(m[0] == k for m in E.monomials) for k in (2, 1, 0)]
    assert by_y == [1, 6, 15]


@given(st.integers(2, 4), st.integers(1, 2), st.integers(1, 3))  # D = md >= 2
def test_monomial_set_invariants(D, e, n):
    E = coeffreduce.monomial_set(D, e, n)
    assert all(m[0] * e + sum(m[1:]) == D * e for m in E.monomials)
    assert len(set(E.monomials)) == len(E) <= (D * e) ** (n + 1)


def test_rank_examples():
    assert coeffreduce.rank_and_nullvector([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, None)
    rank, b = coeffreduce.rank_and_nullvector([[1, 2], [2, 4]])
    assert rank == 1 and b in ([2, -1], [-2, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.randoms(use_true_random=False))
def test_cofactor_vector_on_rank_deficient_matrices(cols, rng):
    rows = [[rng.randrange(-20, 21) for _ in range(cols)] for _ in range(cols - 1)]
    rows.append([sum(rng.randrange(-3, 4) * r[j] for r in rows) for j in range(cols)])
    rank, b = coeffreduce.rank_and_nullvector(rows)
    from sympy import Matrix
    assert rank == Matrix(rows).rank()
    if rank == cols - 1:
        assert any(b) and not any(coeffreduce.mat_vec(rows, b))


@pytest.mark.parametrize("name", ["F_A", "F_C", "F_D"])
def test_solutions_annihilate_coefficients(name):
    F = fixture(name)
    E = coeffreduce.monomial_set(F.D, F.e, F.n)
    C = coeffreduce.solution_matrix(integer_solutions(F, 2), E)
    assert not any(coeffreduce.mat_vec(C, coeffreduce.coefficient_vector(F, E)))


def test_decisions():
    d = coeffreduce.reduce_decision(fixture("F_A"), 2)
    assert d.kind == "coeff_bounded" and d.rank == 9 and d.verified
    assert coeffreduce.proportional(d.b, coeffreduce.coefficient_vector(fixture("F_A"),
                                                                        coeffreduce.monomial_set(2, 1, 3)))
    s = coeffreduce.reduce_decision(fixture("F_A"), 1)
    assert s.kind == "secondary_curve" and s.verified and not s.R.is_zero()
    c = coeffreduce.reduce_decision(fixture("F_C"), 2)
    assert c.kind == "secondary_curve" and c.verified
    t = coeffreduce.reduce_decision(fixture("F_B"), 2)
    assert t.trivial and t.N == 1


def test_solution_matrix_checks():
    E = coeffreduce.monomial_set(2, 1, 3)
    with pytest.raises(ValueError):
        coeffreduce.solution_matrix([], E)
    with pytest.raises(ValueError):
        coeffreduce.solution_matrix([(0, (0, 0))], E)
    assert coeffreduce.solution_matrix([(0, (0, 0, 0))], E) == [[0] * 10]
