"""Acceptance gate: the eight end-to-end properties this package promises.

Each test prints one summary line; run with -s (or read the -v listing) to
see them. Every check is exact arithmetic, no tolerances anywhere.
"""

import itertools
import random
import time
from fractions import Fraction

from quadlie.exact_field import Field
from quadlie.linalg import Matrix
from quadlie.liecore import (
    LieAlgebra,
    QuadraticLieAlgebra,
    centre,
    invariant_forms_basis,
    nilpotency_index,
    quadratic_dimension,
)
from quadlie.oscillator import (
    OscillatorData,
    build_double_extension,
    classify_nilpotent,
    decide_isometric,
    from_lambda_tuple,
    local_criteria,
    lorentz_normalize,
    phi_ts_isometry,
    recover_double_extension,
    skew_census,
    verify_iso_witness,
    verify_structure,
)
from quadlie.quadspace import (
    OrthogonalSpace,
    SkewEndo,
    isotropy_report,
    skew_basis,
)
from quadlie.skewcanon import canonical_pair

Q = Field.parse("Q")
F3 = Field.parse("Fp:3")
F5 = Field.parse("Fp:5")
F7 = Field.parse("Fp:7")


def mk(field, gram_rows, delta_rows):
    return OscillatorData(
        OrthogonalSpace(Matrix(field, gram_rows)), Matrix(field, delta_rows)
    )


def n23_data(field=Q):
    return mk(
        field,
        [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        [[0, 0, 0], [1, 0, 0], [0, -1, 0]],
    )


def n32_data(field=Q):
    return mk(
        field,
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
        [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0]],
    )


def random_invertible(field, rng, n, span=3):
    while True:
        if field.p:
            P = Matrix(field, [[rng.randrange(field.p) for _ in range(n)] for _ in range(n)])
        else:
            P = Matrix(field, [[rng.randint(-span + 1, span) for _ in range(n)] for _ in range(n)])
        if P.rank() == n:
            return P


def random_skew(rng, space):
    F = space.field
    basis = skew_basis(space)
    A = Matrix.zeros(F, space.dim, space.dim)
    for M in basis:
        c = F.of(rng.randrange(F.p))
        if not c:
            continue
        for i in range(space.dim):
            for j in range(space.dim):
                A.data[i][j] = F.add(A.data[i][j], F.mul(c, M.data[i][j]))
    return A


def test_criterion_1_fixture_pair():
    t0 = time.perf_counter()
    for data, dim, index, dq in ((n23_data(), 5, 3, 4), (n32_data(), 6, 2, 7)):
        built = build_double_extension(data)
        assert built.dim == dim
        assert nilpotency_index(built.algebra) == index
        assert quadratic_dimension(built.algebra) == dq
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"criterion 1: PASS (dims 5/6, indices 3/2, dq 4/7; {elapsed:.3f}s)")


def test_criterion_2_series_suite():
    # series from structure constants must equal the seed-power predictions,
    # with the perp duality holding level by level; verify_structure raises
    # on the first mismatch
    t0 = time.perf_counter()
    rng = random.Random(20)
    count = 0
    spaces = []
    for field in (F3, F5):
        for n in range(2, 9):
            spaces.append(OrthogonalSpace.standard(field, n))
        for n in (2, 4, 6, 8):
            G = Matrix.zeros(field, n, n)
            for i in range(n // 2):
                G.data[i][n - 1 - i] = field.one
                G.data[n - 1 - i][i] = field.one
            spaces.append(OrthogonalSpace(G))
    while count < 200:
        space = spaces[count % len(spaces)]
        data = OscillatorData(space, random_skew(rng, space))
        rep = verify_structure(data)
        assert rep["solvable"] and rep["dim"] == space.dim + 2
        count += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    print(f"criterion 2: PASS ({count} random seeds over F3/F5; {elapsed:.1f}s)")


def _odd_chain(field, k0, mu):
    A = Matrix.zeros(field, k0, k0)
    for i in range(k0 - 1):
        A.data[i + 1][i] = field.one
    B = Matrix.zeros(field, k0, k0)
    c = field.of(mu)
    for i in range(k0):
        B.data[i][k0 - 1 - i] = c
        c = field.neg(c)
    return A, B


def _paired(field, m, lam):
    J = Matrix.zeros(field, m, m)
    lam = field.of(lam)
    for i in range(m):
        J.data[i][i] = lam
        if i + 1 < m:
            J.data[i][i + 1] = field.one
    A = Matrix.block_diagonal(field, [J, J.transpose().scale(field.of(-1))])
    B = Matrix.zeros(field, 2 * m, 2 * m)
    for i in range(m):
        B.data[i][m + i] = field.one
        B.data[m + i][i] = field.one
    return A, B


def _random_assembly(field, rng):
    units = [1, 2, -1, -2] if not field.p else list(range(1, field.p))
    pieces = []
    total = 0
    used_odd = set()
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(("odd", "odd", "even", "split"))
        if kind == "odd":
            sizes = [s for s in (1, 3, 5) if total + s <= 10]
            if not field.p:
                sizes = [s for s in sizes if s not in used_odd]
            if not sizes:
                continue
            s = rng.choice(sizes)
            used_odd.add(s)
            pieces.append(_odd_chain(field, s, rng.choice(units)))
            total += s
        elif kind == "even" and total + 4 <= 10:
            pieces.append(_paired(field, 2, 0))
            total += 4
        elif kind == "split":
            m = rng.choice([1, 2])
            if total + 2 * m > 10:
                continue
            lam = rng.choice([u for u in units if field.of(u) != field.zero])
            pieces.append(_paired(field, m, lam))
            total += 2 * m
    if not pieces:
        pieces = [_odd_chain(field, 3, units[0])]
    A = Matrix.block_diagonal(field, [p[0] for p in pieces])
    B = Matrix.block_diagonal(field, [p[1] for p in pieces])
    return SkewEndo(OrthogonalSpace(B), A)


def test_criterion_3_scramble_recovery():
    t0 = time.perf_counter()
    rng = random.Random(30)
    count = 0
    for field in (F3, F5, F7, Q):
        for _ in range(25):
            f = _random_assembly(field, rng)
            base = canonical_pair(f)
            base.verify()
            key = sorted(base.block_signature())
            P = random_invertible(field, rng, f.space.dim, span=2)
            g = SkewEndo(
                OrthogonalSpace(P.transpose() * f.space.gram * P),
                P.inverse() * f.matrix * P,
            )
            cp = canonical_pair(g)
            cp.verify()
            assert sorted(cp.block_signature()) == key
            count += 1
    elapsed = time.perf_counter() - t0
    assert count >= 100
    assert elapsed < 60.0
    print(f"criterion 3: PASS ({count} assemblies over F3/F5/F7/Q; {elapsed:.1f}s)")


def test_criterion_4_census_block_constraints():
    # block sizes odd or divisible by four, odd sizes at most k; the even
    # bound that actually holds on the census is size <= 2k, and the
    # stricter per-degree count floor(k/4) is violated by a size-4 block
    # with k = 2, so it is checked in its corrected form
    strict_even_violations = 0
    checked = 0
    for n in range(1, 5):
        census = skew_census(F3, n)
        for key, rows in census["representatives"].items():
            A = Matrix(F3, rows)
            data = OscillatorData(OrthogonalSpace.standard(F3, n), A)
            if key not in census["nilpotent_degrees"]:
                continue
            rep = classify_nilpotent(data)
            k = rep["min_poly_degree"]
            assert k == census["nilpotent_degrees"][key]
            for s in rep["sizes"]:
                assert s % 2 == 1 or s % 4 == 0
                if s % 2 == 1:
                    assert (s - 1) // 2 <= (k - 1) // 2
                else:
                    assert s <= 2 * k
                    if s // 4 > k // 4:
                        strict_even_violations += 1
                checked += 1
    # the paired 4-chain with a square-zero seed is a real census member,
    # so the corrected even bound is not vacuous
    assert strict_even_violations > 0
    print(
        "criterion 4: PASS (full F3 census dims 1-4, "
        f"{checked} blocks; {strict_even_violations} size-4 blocks at k=2 "
        "witness that the even bound must be size <= 2k)"
    )


def test_criterion_5_local_equivalences():
    # local_criteria raises unless all five criteria agree, so a clean run
    # of the family is the equivalence check
    rng = random.Random(50)
    cases = []
    for lams in ((1,), (1, 2), (1, 2, 3)):
        cases.append((from_lambda_tuple(Q, lams), True))
    for n in (2, 3, 4, 5, 6):
        cases.append(
            (OscillatorData(OrthogonalSpace.standard(Q, n), Matrix.zeros(Q, n, n)), False)
        )
    cases.append((n23_data(), False))
    for n in (2, 4, 6):
        space = OrthogonalSpace.standard(F5, n)
        while True:
            A = random_skew(rng, space)
            if A.rank() == n:
                break
        cases.append((OscillatorData(space, A), True))
    for n in (3, 5):
        space = OrthogonalSpace.standard(F5, n)
        cases.append((OscillatorData(space, random_skew(rng, space)), False))
    cases.append((n23_data(F5), False))
    for data, expect_local in cases:
        rep = local_criteria(data)
        assert rep["agree"]
        assert rep["local"] == expect_local
        assert rep["seed_invertible"] == expect_local
        if expect_local:
            assert rep["dq"] == 2
            assert rep["plane_spanned_by_canonical_forms"]
    print(f"criterion 5: PASS ({len(cases)} instances, dims <= 6 over Q and F5)")


def test_criterion_6_isometry_decisions():
    t0 = time.perf_counter()
    dec = decide_isometric(from_lambda_tuple(Q, (2, 4, 6)), from_lambda_tuple(Q, (1, 2, 3)))
    assert dec["verdict"] == "yes" and dec["mu"] == Q.of(2)
    rep = verify_iso_witness(
        from_lambda_tuple(Q, (2, 4, 6)), from_lambda_tuple(Q, (1, 2, 3)), dec["witness"]
    )
    assert rep["verdict"] == "isometric-isomorphism"

    # normalized tuple equality must match the decision on both sides
    rng = random.Random(60)
    tuples = [(1,), (2,), (1, 2), (2, 4), (1, 3), (1, 1), (2, 2), (1, 2, 3), (3, 6, 9)]
    pairs = 0
    for _ in range(12):
        t1 = rng.choice(tuples)
        t2 = rng.choice(tuples)
        if len(t1) != len(t2):
            continue
        same_key = lorentz_normalize(Q, t1) == lorentz_normalize(Q, t2)
        dec = decide_isometric(from_lambda_tuple(Q, t1), from_lambda_tuple(Q, t2))
        assert dec["verdict"] == ("yes" if same_key else "no")
        if same_key:
            assert verify_iso_witness(
                from_lambda_tuple(Q, t1), from_lambda_tuple(Q, t2), dec["witness"]
            )["verdict"] == "isometric-isomorphism"
        pairs += 1

    assert phi_ts_isometry(from_lambda_tuple(Q, (1, 2)), (0, 1), (0, -1))["verdict"] == "no"
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(f"criterion 6: PASS (scaled tuple yes mu=2, {pairs} key comparisons, "
          f"(0,1) vs (0,-1) no; {elapsed:.1f}s)")


def _scramble_quadratic(rng, Qx, span):
    F = Qx.field
    n = Qx.dim
    P = random_invertible(F, rng, n, span=span)
    Pi = P.inverse()
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            x = [P.data[r][i] for r in range(n)]
            y = [P.data[r][j] for r in range(n)]
            v = Pi.matvec(Qx.algebra.bracket(x, y))
            if any(v):
                brackets[(i, j)] = v
    L = LieAlgebra.from_brackets(F, n, brackets)
    G = P.transpose() * Qx.space.gram * P
    return QuadraticLieAlgebra(L, OrthogonalSpace(G))


def test_criterion_7_recovery_round_trips():
    rng = random.Random(70)
    count = 0
    for _ in range(25):
        lams = tuple(rng.choice((1, 2, 3)) for _ in range(rng.choice((1, 2))))
        d = from_lambda_tuple(Q, lams)
        rec = recover_double_extension(
            _scramble_quadratic(rng, build_double_extension(d), span=2)
        )
        assert rec.recovery["verified"]
        dec = decide_isometric(d, rec)
        assert dec["verdict"] == "yes"
        assert verify_iso_witness(d, rec, dec["witness"])["verdict"] == "isometric-isomorphism"
        count += 1
    for _ in range(25):
        # split invertible seeds on hyperbolic pairings over F5
        m = rng.choice((1, 2))
        G = Matrix.zeros(F5, 2 * m, 2 * m)
        for i in range(m):
            G.data[i][m + i] = F5.one
            G.data[m + i][i] = F5.one
        diag = [F5.of(rng.randrange(1, 5)) for _ in range(m)]
        A = Matrix.zeros(F5, 2 * m, 2 * m)
        for i, a in enumerate(diag):
            A.data[i][i] = a
            A.data[m + i][m + i] = F5.neg(a)
        d = OscillatorData(OrthogonalSpace(G), A)
        rec = recover_double_extension(
            _scramble_quadratic(rng, build_double_extension(d), span=5)
        )
        dec = decide_isometric(d, rec)
        assert dec["verdict"] == "yes"
        assert verify_iso_witness(d, rec, dec["witness"])["verdict"] == "isometric-isomorphism"
        count += 1
    assert count >= 50
    print(f"criterion 7: PASS ({count} witness-verified round trips)")


def _brute_witt(p, n, gram_rows):
    """Largest totally isotropic dimension by projective search; dim <= 4."""

    def quad(v):
        s = 0
        for i in range(n):
            if not v[i]:
                continue
            for j in range(n):
                if v[j]:
                    s += v[i] * gram_rows[i][j] * v[j]
        return s % p

    def bilin(v, w):
        s = 0
        for i in range(n):
            if not v[i]:
                continue
            for j in range(n):
                if w[j]:
                    s += v[i] * gram_rows[i][j] * w[j]
        return s % p

    reps = []
    for v in itertools.product(range(p), repeat=n):
        nz = next((i for i, c in enumerate(v) if c), None)
        if nz is None or v[nz] != 1:
            continue
        if quad(v) == 0:
            reps.append(v)
    if not reps:
        return 0
    if n < 4:
        return 1
    for i, v in enumerate(reps):
        for w in reps[i + 1:]:
            if bilin(v, w) == 0:
                return 2
    return 1


def _regular_grams(p, n):
    """All regular symmetric matrices over F_p as integer row lists."""
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    field = Field.parse(f"Fp:{p}")
    for vals in itertools.product(range(p), repeat=len(slots)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), c in zip(slots, vals):
            rows[i][j] = c
            rows[j][i] = c
        if Matrix(field, rows).rank() == n:
            yield rows


def test_criterion_8_witt_brute_force():
    t0 = time.perf_counter()
    checked = {3: 0, 5: 0}
    for p, dims in ((3, (1, 2, 3, 4)), (5, (1, 2, 3))):
        field = Field.parse(f"Fp:{p}")
        for n in dims:
            for rows in _regular_grams(p, n):
                rep = isotropy_report(OrthogonalSpace(Matrix(field, rows)))
                assert rep.witt_index == _brute_witt(p, n, rows)
                checked[p] += 1
    # dimension four over F5 has ~10^7 symmetric matrices; every congruence
    # class has a diagonal representative and the Witt index is a congruence
    # invariant, so all regular diagonals cover every class exactly, and a
    # sample of dense presentations checks basis independence
    diag4 = 0
    for d in itertools.product(range(1, 5), repeat=4):
        rows = [[0] * 4 for _ in range(4)]
        for i, c in enumerate(d):
            rows[i][i] = c
        rep = isotropy_report(OrthogonalSpace(Matrix(F5, rows)))
        assert rep.witt_index == _brute_witt(5, 4, rows)
        diag4 += 1
    rng = random.Random(80)
    sampled = 0
    while sampled < 300:
        rows = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                rows[i][j] = rows[j][i] = rng.randrange(5)
        M = Matrix(F5, rows)
        if M.rank() != 4:
            continue
        rep = isotropy_report(OrthogonalSpace(M))
        assert rep.witt_index == _brute_witt(5, 4, rows)
        sampled += 1
    elapsed = time.perf_counter() - t0
    print(
        "criterion 8: PASS (F3 exhaustive dims 1-4: "
        f"{checked[3]} forms; F5 exhaustive dims 1-3: {checked[5]} forms, "
        f"dim 4 via all {diag4} regular diagonals plus {sampled} dense samples; "
        f"{elapsed:.1f}s)"
    )
