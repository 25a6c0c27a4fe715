from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import det as oracle_det
from _oracles import rank_q, rows_of, unit_invariant_factors_z
from symsig.errors import DimensionMismatch, RingMismatch, UnsupportedRing
from symsig.linalg import (Matrix, det, direct_sum, image_is_direct_summand, inverse,
                           invariant_factors, is_invertible, kernel_basis, left_inverse, rank,
                           right_inverse, smith_normal_form, solve_linear)
from symsig.rings import LQ, LZ, QQ, ZZ, Laurent

T = Laurent.monomial(1)

# invariant factors computed independently (sympy, over ZZ) and frozen
SNF_ORACLE = [
    ([[1, 1], [-6, -6]], [1]),
    ([[-3, 2, 0, 0], [3, 4, 5, 6]], [1, 1]),
    ([[4, 0, -3, 6], [1, 4, -6, -3], [2, -4, -6, 4], [-2, -5, -1, 4]], [1, 1, 1, 722]),
    ([[3, 0, -4], [-6, -6, 5]], [1, 3]),
    ([[1, 0, -4, -6], [4, 3, 4, 1]], [1, 1]),
    ([[-5, 5], [-5, -3], [2, -6]], [1, 4]),
]


def int_matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def square_int(n_max=4):
    return st.integers(1, n_max).flatmap(lambda n: st.lists(
        st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n))


@pytest.mark.parametrize("rows, factors", SNF_ORACLE)
def test_snf_frozen_oracle(rows, factors):
    assert smith_normal_form(Matrix(ZZ, rows)).factors == factors


@given(int_matrices())
def test_snf_certificate(rows):
    A = Matrix(ZZ, rows)
    U, S, V = smith_normal_form(A)
    assert U @ A @ V == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    f = [S[i, i] for i in range(min(S.shape))]
    nz = [x for x in f if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert f[:len(nz)] == nz
    assert all(S[i, j] == 0 for i in range(S.nrows) for j in range(S.ncols) if i != j)


@given(int_matrices())
def test_rank_and_summand_against_oracle(rows):
    A = Matrix(ZZ, rows)
    assert rank(A) == rank_q(rows)
    W = image_is_direct_summand(A)
    assert bool(W) == unit_invariant_factors_z(rows)
    if W:
        assert W.projector @ W.projector == W.projector
        assert W.retraction @ W.basis == Matrix.identity(ZZ, W.basis.ncols)
        assert W.projector @ A == A


@given(square_int())
def test_det_against_oracle(rows):
    assert det(Matrix(ZZ, rows)) == oracle_det(rows)
    assert det(Matrix(QQ, rows)) == oracle_det(rows)


def test_laurent_determinant_frozen():
    A = Matrix(LZ, [[1 + T, T], [2, Laurent.monomial(-1)]])
    assert det(A) == Laurent({1: -2, 0: 1, -1: 1})


@given(square_int())
def test_inverse(rows):
    A = Matrix(QQ, rows)
    if oracle_det(rows) == 0:
        assert not is_invertible(A)
        return
    Ai = inverse(A)
    assert A @ Ai == Matrix.identity(QQ, A.nrows)
    assert is_invertible(Matrix(ZZ, rows)) == (abs(oracle_det(rows)) == 1)


def test_inverse_over_laurent_unit_determinant():
    A = Matrix(LZ, [[1, T], [0, Laurent.monomial(-2)]])
    assert A @ inverse(A) == Matrix.identity(LZ, 2)
    assert not is_invertible(Matrix(LZ, [[1 + T]]))


@given(int_matrices(), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_solve_linear(rows, x):
    A = Matrix(ZZ, rows)
    x = Matrix.column(ZZ, x[:A.ncols])
    b = A @ x
    y = solve_linear(A, b)
    assert y is not None and A @ y == b


def test_solve_linear_respects_integrality():
    assert solve_linear(Matrix(ZZ, [[2]]), Matrix(ZZ, [[1]])) is None
    assert solve_linear(Matrix(QQ, [[2]]), Matrix(QQ, [[1]])) == Matrix(QQ, [[Fraction(1, 2)]])


@given(int_matrices())
def test_kernel_basis(rows):
    A = Matrix(ZZ, rows)
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.ncols == A.ncols - rank_q(rows)
    if K.ncols:
        assert left_inverse(K) is not None      # a direct summand over Z


def test_one_sided_inverses():
    A = Matrix(ZZ, [[1], [2]])
    L = left_inverse(A)
    assert L @ A == Matrix.identity(ZZ, 1)
    assert right_inverse(Matrix(ZZ, [[2, 3]])) is not None
    assert left_inverse(Matrix(ZZ, [[2], [4]])) is None


def test_invariant_factors_over_fields_and_laurent():
    assert invariant_factors(Matrix(QQ, [[2, 4], [1, 2]])) == [1]
    f = smith_normal_form(Matrix(LQ, [[T - 1, 0], [0, T * T - 1]])).factors
    assert len(f) == 2 and LQ.divmod(f[1], f[0])[1] == 0
    with pytest.raises(UnsupportedRing):
        smith_normal_form(Matrix(LZ, [[1 + T]]))


def test_matrix_basics():
    A = Matrix(LZ, [[1, T], [0, 2]])
    assert A.dagger() == Matrix(LZ, [[1, 0], [Laurent.monomial(-1), 2]])
    assert direct_sum(A, Matrix.identity(LZ, 1)).shape == (3, 3)
    assert Matrix.from_json(A.to_json()) == A
    with pytest.raises(DimensionMismatch):
        Matrix(ZZ, [[1, 2], [3]])
    with pytest.raises(RingMismatch):
        Matrix(ZZ, [[1]]) + Matrix(QQ, [[1]])
    with pytest.raises(DimensionMismatch):
        det(Matrix(ZZ, [[1, 2]]))


@given(int_matrices(3, 3), int_matrices(3, 3))
def test_dagger_reverses_products(a, b):
    A, B = Matrix(ZZ, a), Matrix(ZZ, b)
    if A.ncols == B.nrows:
        assert (A @ B).dagger() == B.dagger() @ A.dagger()
    assert rows_of(A.dagger().dagger()) == a
