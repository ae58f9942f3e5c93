"""Exact dense linear algebra over a Field.

Matrices are small (desk scale, n below ~40) and everything is computed
exactly. Mod-p elimination and multiplication go through quadlie._fast;
the rational path stays in Fraction arithmetic.
"""

from __future__ import annotations

from .errors import ValidationError
from .exact_field import Polynomial, poly_lcm
from . import _fast


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field, rows):
        self.field = field
        self.data = [[field.of(c) for c in row] for row in rows]
        self.nrows = len(self.data)
        self.ncols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.ncols:
                raise ValidationError("ragged matrix rows")

    @classmethod
    def zeros(cls, field, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        return cls(field, [[field.zero] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def diagonal(cls, field, entries):
        m = cls.zeros(field, len(entries), len(entries))
        for i, c in enumerate(entries):
            m.data[i][i] = field.of(c)
        return m

    @classmethod
    def from_cols(cls, field, cols):
        n = len(cols[0]) if cols else 0
        return cls(field, [[cols[j][i] for j in range(len(cols))] for i in range(n)])

    @classmethod
    def block_diagonal(cls, field, blocks):
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        out = cls.zeros(field, n, m)
        r = c = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out.data[r + i][c + j] = b.data[i][j]
            r += b.nrows
            c += b.ncols
        return out

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.nrows)]

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def copy(self):
        return Matrix(self.field, self.data)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.data == other.data
        )

    def __repr__(self):
        body = "; ".join(" ".join(str(c) for c in row) for row in self.data)
        return f"Matrix({self.nrows}x{self.ncols}: {body})"

    def transpose(self):
        return Matrix(
            self.field,
            [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def __add__(self, other):
        F = self.field
        return Matrix(
            F,
            [
                [F.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other):
        F = self.field
        return Matrix(
            F,
            [
                [F.sub(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
        )

    def __neg__(self):
        F = self.field
        return Matrix(F, [[F.neg(a) for a in row] for row in self.data])

    def scale(self, c):
        F = self.field
        c = F.of(c)
        return Matrix(F, [[F.mul(c, a) for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValidationError("inner dimensions differ")
            F = self.field
            if F.p:
                flat = _fast.fp_matmul(
                    [c for row in self.data for c in row],
                    self.nrows,
                    self.ncols,
                    [c for row in other.data for c in row],
                    other.nrows,
                    other.ncols,
                    F.p,
                )
                m = other.ncols
                out = Matrix.zeros(F, self.nrows, m)
                out.data = [list(flat[i * m : (i + 1) * m]) for i in range(self.nrows)]
                return out
            out = Matrix.zeros(F, self.nrows, other.ncols)
            for i in range(self.nrows):
                row = self.data[i]
                orow = out.data[i]
                for t in range(self.ncols):
                    a = row[t]
                    if not a:
                        continue
                    brow = other.data[t]
                    for j in range(other.ncols):
                        orow[j] += a * brow[j]
            return out
        raise TypeError("matrix multiplication needs a Matrix")

    def matvec(self, v):
        F = self.field
        if len(v) != self.ncols:
            raise ValidationError("vector length mismatch")
        out = []
        for i in range(self.nrows):
            acc = F.zero
            row = self.data[i]
            for j, c in enumerate(v):
                if c:
                    acc = F.add(acc, F.mul(row[j], c))
            out.append(acc)
        return out

    def is_zero(self):
        return all(not c for row in self.data for c in row)

    def is_symmetric(self):
        return self.is_square and all(
            self.data[i][j] == self.data[j][i]
            for i in range(self.nrows)
            for j in range(i)
        )

    def rref(self):
        """Canonical reduced row echelon form: (R, pivot columns, rank)."""
        F = self.field
        if F.p:
            flat, pivots, rank = _fast.fp_rref(
                [c for row in self.data for c in row], self.nrows, self.ncols, F.p
            )
            R = Matrix.zeros(F, self.nrows, self.ncols)
            R.data = [
                list(flat[i * self.ncols : (i + 1) * self.ncols])
                for i in range(self.nrows)
            ]
            return R, tuple(pivots), rank
        m = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.ncols):
            if r == self.nrows:
                break
            pr = next((i for i in range(r, self.nrows) if m[i][c]), -1)
            if pr < 0:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = 1 / m[r][c]
            if inv != 1:
                m[r] = [a * inv for a in m[r]]
            for i in range(self.nrows):
                f = m[i][c]
                if i == r or not f:
                    continue
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        R = Matrix(F, m)
        return R, tuple(pivots), r

    def rank(self):
        return self.rref()[2]

    def inverse(self):
        if not self.is_square:
            raise ValidationError("inverse of a non-square matrix")
        F = self.field
        n = self.nrows
        aug = Matrix(
            F,
            [
                self.data[i] + [F.one if j == i else F.zero for j in range(n)]
                for i in range(n)
            ],
        )
        R, pivots, rank = aug.rref()
        if rank < n or pivots[:n] != tuple(range(n)):
            raise ValidationError("matrix is singular")
        return Matrix(F, [row[n:] for row in R.data])

    def det(self):
        if not self.is_square:
            raise ValidationError("determinant of a non-square matrix")
        F = self.field
        m = [list(row) for row in self.data]
        n = self.nrows
        det = F.one
        for c in range(n):
            pr = next((i for i in range(c, n) if m[i][c]), -1)
            if pr < 0:
                return F.zero
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                det = F.neg(det)
            det = F.mul(det, m[c][c])
            inv = F.inv(m[c][c])
            for i in range(c + 1, n):
                f = F.mul(m[i][c], inv)
                if f:
                    m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[c])]
        return det

    def solve(self, rhs):
        """One exact solution of self * x = rhs, or None if inconsistent."""
        F = self.field
        aug = Matrix(F, [self.data[i] + [rhs[i]] for i in range(self.nrows)])
        R, pivots, rank = aug.rref()
        if self.ncols in pivots:
            return None
        x = [F.zero] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = R.data[r][self.ncols]
        return x

    def to_json(self):
        F = self.field
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [F.to_str(c) for row in self.data for c in row],
        }

    @classmethod
    def from_json(cls, field, doc):
        r, c = doc["rows"], doc["cols"]
        ent = doc["entries"]
        if len(ent) != r * c:
            raise ValidationError("matrix entry count does not match its shape")
        return cls(field, [ent[i * c : (i + 1) * c] for i in range(r)])


class Subspace:
    """Row space held in reduced echelon form, so == is structural equality."""

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field, ambient_dim, vectors):
        self.field = field
        self.ambient_dim = ambient_dim
        if vectors:
            R, _, rank = Matrix(field, vectors).rref()
            self.basis = [R.data[i] for i in range(rank)]
        else:
            self.basis = []

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, [])

    @classmethod
    def full(cls, field, ambient_dim):
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim).data)

    @property
    def dim(self):
        return len(self.basis)

    def matrix(self):
        return Matrix(self.field, self.basis or [[self.field.zero] * self.ambient_dim])

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"

    def contains(self, v):
        if all(not c for c in v):
            return True
        if not self.basis:
            return False
        R, _, rank = Matrix(self.field, self.basis + [list(v)]).rref()
        return rank == self.dim

    def is_subspace_of(self, other):
        return all(other.contains(v) for v in self.basis)

    def sum_with(self, other):
        return Subspace(self.field, self.ambient_dim, self.basis + other.basis)

    def intersect(self, other):
        a = self.constraints()
        b = other.constraints()
        stacked = Matrix(self.field, a.data + b.data)
        return kernel_basis(stacked)

    def constraints(self):
        """Matrix C with self = {v : C v = 0}."""
        if not self.basis:
            return Matrix.identity(self.field, self.ambient_dim)
        ker = kernel_basis(self.matrix())
        if not ker.basis:
            return Matrix.zeros(self.field, 1, self.ambient_dim)
        return ker.matrix()

    def coords_of(self, v):
        """Coefficients of v in the echelon basis, or None if outside."""
        if not self.basis:
            return [] if all(not c for c in v) else None
        M = self.matrix().transpose()
        return M.solve(list(v))


def kernel_basis(A):
    """Canonical echelon basis of {v : A v = 0}."""
    R, pivots, rank = A.rref()
    F = A.field
    free = [j for j in range(A.ncols) if j not in pivots]
    vectors = []
    for j in free:
        v = [F.zero] * A.ncols
        v[j] = F.one
        for r, c in enumerate(pivots):
            v[c] = F.neg(R.data[r][j])
        vectors.append(v)
    return Subspace(F, A.ncols, vectors)


def image_basis(A):
    """Column space of A as a canonical Subspace."""
    return Subspace(A.field, A.nrows, [A.col(j) for j in range(A.ncols)])


def poly_at_matrix(p, A):
    """Evaluate a polynomial at a square matrix (Horner)."""
    F = A.field
    n = A.nrows
    acc = Matrix.zeros(F, n, n)
    for c in reversed(p.coeffs or (F.zero,)):
        acc = acc * A
        for i in range(n):
            acc.data[i][i] = F.add(acc.data[i][i], F.of(c))
    return acc


def minimal_polynomial(A):
    """Monic least-degree annihilator of a square matrix.

    Computed per basis vector: the first linear dependence in the Krylov
    sequence e_i, A e_i, A^2 e_i, ... gives an annihilator of that vector,
    and the lcm over i annihilates everything. The result is re-verified
    by evaluating it at A.
    """
    if not A.is_square:
        raise ValidationError("minimal polynomial of a non-square matrix")
    F = A.field
    n = A.nrows
    if n == 0:
        return Polynomial.one(F)
    m = Polynomial.one(F)
    for i in range(n):
        v = [F.one if j == i else F.zero for j in range(n)]
        if m.degree > 0 and poly_at_matrix(m, A).matvec(v) == [F.zero] * n:
            continue
        krylov = [v]
        w = v
        while True:
            w = A.matvec(w)
            K = Matrix.from_cols(F, krylov)
            sol = K.solve(w)
            if sol is not None:
                ann = Polynomial(F, [F.neg(c) for c in sol] + [F.one])
                m = poly_lcm(m, ann)
                break
            krylov.append(w)
        if m.degree == n:
            break
    if not poly_at_matrix(m, A).is_zero():
        raise ValidationError("annihilator verification failed")
    return m


def primary_component(A, pi, k):
    """Kernel of pi(A)^k, the primary component for an irreducible factor."""
    m = minimal_polynomial(A)
    power = Polynomial.one(pi.field)
    for _ in range(k):
        power = power * pi
    if not (m % pi).is_zero:
        raise ValidationError("factor does not divide the minimal polynomial")
    M = poly_at_matrix(pi, A)
    P = Matrix.identity(A.field, A.nrows)
    for _ in range(k):
        P = P * M
    comp = kernel_basis(P)
    for v in comp.basis:
        if not comp.contains(A.matvec(v)):
            raise ValidationError("primary component is not invariant")
    return comp


def solve_triangular(T, rhs):
    """Exact solution of T x = rhs for triangular T with invertible diagonal."""
    if not T.is_square:
        raise ValidationError("triangular solve needs a square matrix")
    F = T.field
    n = T.nrows
    lower = all(not T.data[i][j] for i in range(n) for j in range(i + 1, n))
    upper = all(not T.data[i][j] for i in range(n) for j in range(i))
    if not (lower or upper):
        raise ValidationError("matrix is not triangular")
    for i in range(n):
        if not T.data[i][i]:
            raise ValidationError(f"zero diagonal entry at {i}")
    x = [F.zero] * n
    order = range(n) if lower else range(n - 1, -1, -1)
    for i in order:
        acc = rhs[i]
        for j in range(n):
            if j != i and T.data[i][j]:
                acc = F.sub(acc, F.mul(T.data[i][j], x[j]))
        x[i] = F.div(acc, T.data[i][i])
    if T.matvec(x) != list(rhs):
        raise ValidationError("triangular solve verification failed")
    return x
