"""The compiled mod-p kernel must be indistinguishable from the pure one."""

import os
import random
import subprocess
import sys

import pytest

from quadlie._fast import pure

comp = pytest.importorskip(
    "quadlie._fast._fpcore", reason="compiled kernel not built"
)

PRIMES = (3, 5, 7, 31, 1009)


def rand_flat(rng, n, p):
    return [rng.randrange(p) for _ in range(n)]


def test_rref_equivalence():
    rng = random.Random(1)
    shapes = [(0, 3), (3, 0), (1, 1), (2, 5), (5, 2), (4, 4), (6, 6), (7, 3)]
    for p in PRIMES:
        for nr, nc in shapes:
            for _ in range(20):
                mat = rand_flat(rng, nr * nc, p)
                assert comp.fp_rref(mat, nr, nc, p) == pure.fp_rref(mat, nr, nc, p)


def test_rref_equivalence_low_rank():
    # duplicated rows force pivot skips on both sides at the same columns
    rng = random.Random(2)
    for p in PRIMES:
        for _ in range(30):
            row = rand_flat(rng, 4, p)
            mat = row + row + rand_flat(rng, 4, p)
            got = comp.fp_rref(mat, 3, 4, p)
            assert got == pure.fp_rref(mat, 3, 4, p)
            assert got[2] <= 2


def test_rref_idempotent():
    rng = random.Random(3)
    for _ in range(20):
        mat = rand_flat(rng, 20, 7)
        m1, piv, rank = comp.fp_rref(mat, 4, 5, 7)
        assert comp.fp_rref(m1, 4, 5, 7) == (m1, piv, rank)


def test_matmul_equivalence():
    rng = random.Random(4)
    shapes = [(1, 1, 1), (2, 3, 4), (4, 4, 4), (5, 1, 5), (0, 3, 2), (3, 2, 0)]
    for p in PRIMES:
        for n, k, m in shapes:
            for _ in range(20):
                a = rand_flat(rng, n * k, p)
                b = rand_flat(rng, k * m, p)
                assert comp.fp_matmul(a, n, k, b, k, m, p) == pure.fp_matmul(
                    a, n, k, b, k, m, p
                )


def test_matmul_shape_error():
    with pytest.raises(ValueError):
        comp.fp_matmul([1, 2], 1, 2, [1, 2, 3], 3, 1, 5)
    with pytest.raises(ValueError):
        pure.fp_matmul([1, 2], 1, 2, [1, 2, 3], 3, 1, 5)


def _backend_in_subprocess(force_pure):
    env = dict(os.environ)
    env.pop("QUADLIE_FORCE_PURE", None)
    if force_pure:
        env["QUADLIE_FORCE_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", "from quadlie._fast import BACKEND; print(BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return out.stdout.strip()


def test_backend_selection():
    assert _backend_in_subprocess(force_pure=True) == "pure"
    assert _backend_in_subprocess(force_pure=False) == "compiled"


def test_full_suite_entry_points_agree():
    # one structural computation through each backend, compared end to end
    script = (
        "from quadlie.exact_field import Field\n"
        "from quadlie.linalg import Matrix\n"
        "from quadlie.quadspace import OrthogonalSpace\n"
        "from quadlie.skewcanon import canonical_pair\n"
        "from quadlie.quadspace import SkewEndo\n"
        "F = Field.parse('Fp:7')\n"
        "A = Matrix(F, [[0,1,2,3],[6,0,4,5],[5,3,0,6],[4,2,1,0]])\n"
        "S = OrthogonalSpace.standard(F, 4)\n"
        "M = (A - A.transpose())\n"
        "cp = canonical_pair(SkewEndo(S, M))\n"
        "print(sorted(cp.block_signature()))\n"
    )
    outs = []
    for force in (True, False):
        env = dict(os.environ)
        env.pop("QUADLIE_FORCE_PURE", None)
        if force:
            env["QUADLIE_FORCE_PURE"] = "1"
        out = subprocess.run(
            [sys.executable, "-c", script],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        outs.append(out.stdout)
    assert outs[0] == outs[1]
