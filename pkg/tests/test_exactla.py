from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from periodcoh.exactla import (
    Matrix,
    determinant,
    integer_inverse,
    parse_matrix,
    rational_nullspace,
    rational_rank,
    rational_solve,
    smith_normal_form,
    solve_integer,
)

from oracles import det as oracle_det, determinantal_factors


def small_matrices(max_dim=4, bound=9):
    return st.integers(0, max_dim).flatmap(
        lambda m: st.integers(0, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m).map(lambda rows: (rows, n))))


def check_snf(A: Matrix):
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert determinant(s.U) in (1, -1)
    assert determinant(s.V) in (1, -1)
    d = s.invariant_factors
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert s.D[i, j] == 0
    nz = [x for x in d if x]
    assert d[: len(nz)] == tuple(nz)
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return s


def test_snf_small_example():
    s = check_snf(Matrix.from_rows([[2, 4], [6, 8]]))
    assert s.invariant_factors == (2, 4)


def test_snf_four_by_four():
    A = Matrix.from_rows([[2, 4, 4, 2], [-6, 6, 12, 10], [10, -4, -16, -6], [0, 0, 0, 0]])
    assert check_snf(A).invariant_factors == (2, 2, 12, 0)  # frozen from the minors oracle
    assert list(check_snf(A).invariant_factors[:3]) == determinantal_factors(A.tolist(), 4)


def test_snf_empty_shapes():
    for shape in ((0, 0), (0, 3), (3, 0)):
        s = smith_normal_form(Matrix.zeros(*shape))
        assert s.D.shape == shape
        assert s.rank == 0


def test_snf_rejects_fractions():
    with pytest.raises(TypeError):
        smith_normal_form(Matrix.from_rows([[Fraction(1, 2)]]))


@settings(max_examples=300, deadline=None)
@given(small_matrices())
def test_snf_matches_determinantal_divisors(data):
    rows, n = data
    A = Matrix.from_rows(rows, n) if rows else Matrix.zeros(0, n)
    s = check_snf(A)
    nz = [x for x in s.invariant_factors if x]
    assert nz == determinantal_factors(rows, n)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_determinant_matches_elimination(rows):
    A = Matrix.from_rows(rows)
    assert determinant(A) == oracle_det(rows)


def test_solve_integer():
    A = Matrix.from_rows([[2, 4], [6, 8]])
    x = solve_integer(A, [2, 6])
    assert A.apply(x) == (2, 6)
    assert solve_integer(Matrix.from_rows([[2]]), [3]) is None
    with pytest.raises(ValueError):
        solve_integer(A, [1])


@settings(max_examples=200, deadline=None)
@given(small_matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_integer_solutions_are_solutions(data, xs):
    rows, n = data
    A = Matrix.from_rows(rows, n) if rows else Matrix.zeros(0, n)
    b = A.apply(xs[:n])
    x = solve_integer(A, b)
    assert x is not None and A.apply(x) == b


def test_rational_helpers():
    A = Matrix.from_rows([[1, 2, 3], [2, 4, 6]])
    assert rational_rank(A) == 1
    ns = rational_nullspace(A)
    assert len(ns) == 2 and all(A.apply(v) == (0, 0) for v in ns)
    x = rational_solve(Matrix.from_rows([[2, 0], [0, 3]]), [1, 1])
    assert x == (Fraction(1, 2), Fraction(1, 3))


def test_integer_inverse_and_text_round_trip():
    U = Matrix.from_rows([[2, 1], [1, 1]])
    assert U @ integer_inverse(U) == Matrix.identity(2)
    assert parse_matrix(U.to_text()) == U


def test_matrix_rejects_bool_and_bad_shapes():
    with pytest.raises(TypeError):
        Matrix.from_rows([[True]])
    with pytest.raises(ValueError):
        Matrix.from_rows([[1, 2], [3]])
