"""Lie algebra core: series, centre, invariant forms, quadratic dimension."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadlie.errors import ValidationError
from quadlie.exact_field import Field
from quadlie.liecore import (
    LieAlgebra,
    QuadraticLieAlgebra,
    centre,
    derived_series,
    dq_lower_bound_check,
    form_in_span,
    invariant_forms_basis,
    is_heisenberg,
    is_nilpotent,
    is_reduced,
    is_solvable,
    jacobi_check,
    lower_central_series,
    nilpotency_index,
    quadratic_dimension,
    series_duality_check,
    upper_central_series,
)
from quadlie.linalg import Matrix
from quadlie.quadspace import OrthogonalSpace, ortho_complement

Q = Field.parse("Q")
F5 = Field.parse("Fp:5")


def heisenberg(field, m=1):
    """2m+1 dimensional: [x_i, y_i] = z, basis x_1..x_m, y_1..y_m, z."""
    n = 2 * m + 1
    brackets = {}
    for i in range(m):
        v = [0] * n
        v[n - 1] = 1
        brackets[(i, m + i)] = v
    return LieAlgebra.from_brackets(field, n, brackets)


def sl2_like(field):
    # basis (e, f, h): [e,f] = h, [e,h] = -2e, [f,h] = 2f
    return LieAlgebra.from_brackets(
        field, 3, {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]}
    )


def n23(field):
    """Free 2-step nilpotent seed extension: basis (d, b1, b2, b3, d*)."""
    L = LieAlgebra.from_brackets(
        field,
        5,
        {(0, 1): [0, 0, 1, 0, 0], (0, 2): [0, 0, 0, -1, 0], (1, 2): [0, 0, 0, 0, 1]},
    )
    G = Matrix.zeros(field, 5, 5)
    G.data[0][4] = G.data[4][0] = field.one
    G.data[1][3] = G.data[3][1] = field.one
    G.data[2][2] = field.one
    return QuadraticLieAlgebra(L, OrthogonalSpace(G))


def n32(field):
    """Two-chain seed extension: basis (d, a1, a2, a3, a4, d*)."""
    L = LieAlgebra.from_brackets(
        field,
        6,
        {
            (0, 1): [0, 0, 1, 0, 0, 0],
            (0, 4): [0, 0, 0, -1, 0, 0],
            (1, 4): [0, 0, 0, 0, 0, 1],
        },
    )
    G = Matrix.zeros(field, 6, 6)
    G.data[0][5] = G.data[5][0] = field.one
    for i in (1, 2):
        G.data[i][i + 2] = G.data[i + 2][i] = field.one
    return QuadraticLieAlgebra(L, OrthogonalSpace(G))


def conjugate(L, P):
    """Transport structure constants through the basis change P."""
    field = L.field
    Pi = P.inverse()
    brackets = {}
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            x = [P.data[r][i] for r in range(L.dim)]
            y = [P.data[r][j] for r in range(L.dim)]
            v = Pi.matvec(L.bracket(x, y))
            if any(c != field.zero for c in v):
                brackets[(i, j)] = v
    return LieAlgebra.from_brackets(field, L.dim, brackets)


def random_invertible(rng, field, n):
    while True:
        M = Matrix(field, [[field.of(rng.randrange(5)) for _ in range(n)] for _ in range(n)])
        if M.rank() == n:
            return M


def test_jacobi_failure_reports_triple():
    bad = LieAlgebra.from_brackets(Q, 3, {(0, 1): [1, 0, 0], (0, 2): [0, 1, 0]})
    ok, triple = jacobi_check(bad)
    assert not ok
    assert triple == (0, 1, 2)


def test_quadratic_constructor_rejects_bad_jacobi():
    bad = LieAlgebra.from_brackets(Q, 3, {(0, 1): [1, 0, 0], (0, 2): [0, 1, 0]})
    with pytest.raises(ValidationError, match="Jacobi"):
        QuadraticLieAlgebra(bad, OrthogonalSpace.standard(Q, 3))


def test_quadratic_constructor_rejects_noninvariant_form():
    with pytest.raises(ValidationError, match="invariant"):
        QuadraticLieAlgebra(heisenberg(Q), OrthogonalSpace.standard(Q, 3))


def test_heisenberg_series():
    H = heisenberg(Q)
    assert [S.dim for S in lower_central_series(H)] == [3, 1, 0]
    assert [S.dim for S in derived_series(H)] == [3, 1, 0]
    assert [S.dim for S in upper_central_series(H)] == [1, 3]
    assert centre(H).dim == 1
    assert is_nilpotent(H) and is_solvable(H)
    assert nilpotency_index(H) == 2


def test_abelian_series():
    A = LieAlgebra.abelian(Q, 4)
    assert [S.dim for S in lower_central_series(A)] == [4, 0]
    assert [S.dim for S in upper_central_series(A)] == [4]
    assert centre(A).dim == 4
    assert nilpotency_index(A) == 1


def test_sl2_like_is_perfect():
    # the derived series lists the stable term once: perfect stops at [L]
    L = sl2_like(Q)
    assert [S.dim for S in derived_series(L)] == [3]
    assert not is_solvable(L)
    assert not is_nilpotent(L)
    with pytest.raises(ValidationError):
        nilpotency_index(L)


def test_is_heisenberg():
    ok, basis = is_heisenberg(heisenberg(Q))
    assert ok
    vs, ws, z = basis
    assert len(vs) == len(ws) == 1
    ok2, _ = is_heisenberg(heisenberg(F5, m=2))
    assert ok2
    assert not is_heisenberg(LieAlgebra.abelian(Q, 3))[0]
    assert not is_heisenberg(sl2_like(Q))[0]


def test_invariant_forms_abelian_dimension():
    # every symmetric form is invariant when the bracket vanishes
    for n in (1, 2, 3, 4):
        basis = invariant_forms_basis(LieAlgebra.abelian(Q, n))
        assert len(basis) == n * (n + 1) // 2


def test_quadratic_dimension_heisenberg():
    assert quadratic_dimension(heisenberg(Q)) == 3


def test_quadratic_dimension_extensions():
    assert quadratic_dimension(n23(Q).algebra) == 4
    assert quadratic_dimension(n32(Q).algebra) == 7


def test_extension_oracles():
    N = n23(Q)
    assert N.dim == 5
    assert centre(N.algebra).dim == 2
    assert nilpotency_index(N.algebra) == 3
    assert is_reduced(N)
    M = n32(Q)
    assert nilpotency_index(M.algebra) == 2
    assert is_reduced(M)


def test_not_reduced_abelian():
    A = QuadraticLieAlgebra(LieAlgebra.abelian(Q, 2), OrthogonalSpace.standard(Q, 2))
    assert not is_reduced(A)


def test_series_duality():
    assert series_duality_check(n23(Q), max_k=3) == [1, 2, 3]
    assert series_duality_check(n32(Q), max_k=2) == [1, 2]


def test_derived_perp_is_centre():
    N = n23(Q)
    L2 = derived_series(N.algebra)[1]
    assert ortho_complement(N.space, L2) == centre(N.algebra)


def test_dq_lower_bound():
    holds, dq, bound = dq_lower_bound_check(n32(Q))
    assert (holds, dq, bound) == (True, 7, 7)
    holds, dq, bound = dq_lower_bound_check(n23(Q))
    assert holds and dq == 4 and bound == 4


def test_dq_lower_bound_rejects_abelian():
    A = QuadraticLieAlgebra(LieAlgebra.abelian(Q, 2), OrthogonalSpace.standard(Q, 2))
    with pytest.raises(ValidationError):
        dq_lower_bound_check(A)


def test_form_in_span():
    N = n23(Q)
    forms = invariant_forms_basis(N.algebra)
    assert form_in_span(forms, N.space.gram) is not None
    # E22 pairs the image of ad(d) with itself and breaks invariance
    S = Matrix.zeros(Q, 5, 5)
    S.data[2][2] = Q.one
    assert form_in_span(forms, S) is None


def test_invariant_forms_contain_gram():
    for Nq in (n23(Q), n32(Q), n23(F5)):
        forms = invariant_forms_basis(Nq.algebra)
        assert form_in_span(forms, Nq.space.gram) is not None


def test_json_round_trip():
    N = n32(Q)
    doc = N.to_json()
    back = QuadraticLieAlgebra.from_json(doc)
    assert back.algebra.structure == N.algebra.structure
    assert back.space.gram == N.space.gram


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_dq_invariant_under_base_change(seed):
    rng = random.Random(seed)
    L = n32(F5).algebra
    P = random_invertible(rng, F5, 6)
    assert quadratic_dimension(conjugate(L, P)) == 7


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_centre_dim_invariant_under_base_change(seed):
    rng = random.Random(seed)
    L = n23(F5).algebra
    P = random_invertible(rng, F5, 5)
    assert centre(conjugate(L, P)).dim == 2
