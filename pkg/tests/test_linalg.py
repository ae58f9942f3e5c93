import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadlie.errors import ValidationError
from quadlie.exact_field import Field, Polynomial
from quadlie.linalg import (
    Matrix,
    Subspace,
    kernel_basis,
    minimal_polynomial,
    poly_at_matrix,
    primary_component,
    solve_triangular,
)

Q = Field.parse("Q")
F5 = Field.parse("Fp:5")


def jordan(field, n, lam=0):
    A = Matrix.zeros(field, n, n)
    lam = field.of(lam)
    for i in range(n):
        A.data[i][i] = lam
        if i + 1 < n:
            A.data[i][i + 1] = field.one
    return A


def random_matrix(field, rng, n, m=None):
    m = n if m is None else m
    return Matrix(field, [[field.random(rng) for _ in range(m)] for _ in range(n)])


def random_invertible(field, rng, n):
    while True:
        A = random_matrix(field, rng, n)
        if A.det() != field.zero:
            return A


# ------------------------------------------------------------------ matrix

def test_constructor_coerces_and_validates():
    A = Matrix(Q, [[1, "1/2"], [0, 3]])
    assert A.data[0][1] == Fraction(1, 2)
    with pytest.raises(ValidationError):
        Matrix(Q, [[1, 2], [3]])


def test_mul_inverse_det():
    A = Matrix(Q, [[2, 1], [1, 1]])
    assert A.det() == 1
    Ainv = A.inverse()
    assert A * Ainv == Matrix.identity(Q, 2)


def test_singular_inverse_raises():
    A = Matrix(Q, [[1, 2], [2, 4]])
    with pytest.raises(ValidationError):
        A.inverse()


def test_rref_canonical_and_idempotent():
    A = Matrix(Q, [[0, 2, 4], [1, 1, 1]])
    R, pivots, rank = A.rref()
    assert rank == 2 and pivots == (0, 1)
    assert R == Matrix(Q, [[1, 0, -1], [0, 1, 2]])
    R2, _, _ = R.rref()
    assert R2 == R


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_rref_rank_matches_det(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    A = random_matrix(F5, rng, n)
    _, _, rank = A.rref()
    assert (rank == n) == (A.det() != 0)


def test_solve_columns():
    A = Matrix(Q, [[1, 2], [3, 4]])
    b = [Q.of(5), Q.of(11)]
    x = A.solve(b)
    assert A.matvec(x) == b
    assert Matrix(Q, [[1, 1], [1, 1]]).solve([Q.zero, Q.one]) is None


def test_block_diagonal_and_from_cols():
    A = Matrix.block_diagonal(Q, [Matrix(Q, [[1]]), Matrix(Q, [[2, 0], [0, 3]])])
    assert A.nrows == 3 and A.data[1][1] == 2 and A.data[0][1] == 0
    B = Matrix.from_cols(Q, [[1, 0], [7, 1]])
    assert B.col(1) == [Q.of(7), Q.one]


# ---------------------------------------------------------------- kernels

def test_kernel_oracle_jordan():
    K = kernel_basis(jordan(Q, 3))
    assert K.dim == 1
    assert K.basis[0] == [Q.one, Q.zero, Q.zero]


def test_kernel_is_canonical_under_row_scaling():
    A = Matrix(Q, [[1, 2, 3]])
    B = Matrix(Q, [[2, 4, 6]])
    assert kernel_basis(A).basis == kernel_basis(B).basis


# --------------------------------------------------------------- subspaces

def test_subspace_reduction_membership():
    S = Subspace(Q, 3, [[1, 1, 0], [2, 2, 0], [0, 0, 1]])
    assert S.dim == 2
    assert S.contains([Q.of(3), Q.of(3), Q.of(-1)])
    assert not S.contains([Q.one, Q.zero, Q.zero])


def test_subspace_coords_roundtrip():
    rng = random.Random(3)
    S = Subspace(F5, 4, [[1, 0, 2, 0], [0, 1, 0, 3]])
    for _ in range(10):
        c = [F5.random(rng) for _ in range(S.dim)]
        v = [sum(c[k] * S.basis[k][j] for k in range(S.dim)) % 5 for j in range(4)]
        assert S.coords_of(v) == c


def test_subspace_intersect_sum():
    U = Subspace(Q, 3, [[1, 0, 0], [0, 1, 0]])
    W = Subspace(Q, 3, [[0, 1, 0], [0, 0, 1]])
    assert U.intersect(W).dim == 1
    assert U.sum_with(W).dim == 3
    assert U.intersect(W).basis[0] == [Q.zero, Q.one, Q.zero]


# ------------------------------------------------------- minimal polynomial

def test_minpoly_oracles():
    x = Polynomial.x(Q)
    assert minimal_polynomial(jordan(Q, 3)) == x * x * x
    A = Matrix.block_diagonal(Q, [jordan(Q, 2, 1), jordan(Q, 2, 1)])
    one = Polynomial.one(Q)
    assert minimal_polynomial(A) == (x - one) * (x - one)
    assert minimal_polynomial(Matrix.identity(F5, 4)) == Polynomial(F5, [4, 1])


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_minpoly_annihilates_and_is_minimal(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    A = random_matrix(F5, rng, n)
    m = minimal_polynomial(A)
    assert m.is_monic and m.degree <= n
    assert poly_at_matrix(m, A).is_zero()
    if m.degree > 0:
        trunc = Polynomial(F5, m.coeffs[:-1])
        if not trunc.is_zero:
            assert not poly_at_matrix(trunc, A).is_zero()


def test_primary_component_splits_dimensions():
    A = Matrix.block_diagonal(Q, [jordan(Q, 2, 0), jordan(Q, 3, 1)])
    x = Polynomial.x(Q)
    U0 = primary_component(A, x, 2)
    U1 = primary_component(A, x - Polynomial.one(Q), 3)
    assert U0.dim == 2 and U1.dim == 3
    assert U0.intersect(U1).dim == 0


def test_solve_triangular():
    T = Matrix(Q, [[1, 2, 3], [0, 1, 4], [0, 0, 1]])
    b = [Q.of(6), Q.of(5), Q.of(1)]
    x = solve_triangular(T, b)
    assert T.matvec(x) == b
    with pytest.raises(ValidationError):
        solve_triangular(Matrix(Q, [[0, 1], [1, 0]]), [Q.one, Q.one])


# ------------------------------------------------------------- invariants

@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_minpoly_similarity_invariant(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    A = random_matrix(F5, rng, n)
    P = random_invertible(F5, rng, n)
    assert minimal_polynomial(P.inverse() * A * P) == minimal_polynomial(A)
