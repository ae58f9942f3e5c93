"""Exact scalars over Q and F_p (p an odd prime) and univariate polynomials.

Scalars are plain values: fractions.Fraction for Q, ints in [0, p) for F_p.
A Field instance carries the arithmetic so the same code runs over either
field. Characteristic 2 is rejected everywhere; halving is used throughout
the form algorithms.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd as _int_gcd, isqrt

from .errors import CapabilityError, ValidationError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n):
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n, seed=1):
    # n odd composite, no small factors; returns a nontrivial factor
    while True:
        seed += 1
        x = y = seed % n
        c = seed
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _int_gcd(abs(x - y), n)
        if d != n:
            return d


def _factor_int(n):
    """Prime factorization of n >= 1 as a dict prime -> exponent."""
    out = {}
    for q in (2, 3, 5, 7, 11, 13):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q = 17
    while q * q <= n and q < 100000:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend([r, r])
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return out


def _squarefree_part(n):
    """The squarefree integer s with n = s * (square), keeping the sign."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    s = 1
    for q, e in _factor_int(n).items():
        if e % 2:
            s *= q
    return sign * s


class Field:
    """Arithmetic context. p == 0 means Q; otherwise an odd prime p."""

    __slots__ = ("p",)

    def __init__(self, p=0):
        if p:
            if p == 2:
                raise ValidationError("characteristic 2 is not supported")
            if not _is_prime(p):
                raise ValidationError(f"{p} is not prime")
        self.p = p

    @classmethod
    def rationals(cls):
        return cls(0)

    @classmethod
    def prime(cls, p):
        return cls(p)

    @classmethod
    def parse(cls, spec):
        """Parse a field spec string, 'Q' or 'Fp:<p>'."""
        if spec == "Q":
            return cls(0)
        if spec.startswith("Fp:"):
            try:
                return cls(int(spec[3:]))
            except ValueError:
                pass
        raise ValidationError(f"unrecognized field spec {spec!r}")

    def spec(self):
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    @property
    def is_rational(self):
        return self.p == 0

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.spec()!r})"

    # element construction

    def of(self, v):
        if self.p == 0:
            if isinstance(v, Fraction):
                return v
            if isinstance(v, int):
                return Fraction(v)
            if isinstance(v, str):
                return Fraction(v)
            raise ValidationError(f"not a rational scalar: {v!r}")
        if isinstance(v, str):
            v = int(v)
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ValidationError(f"denominator divisible by {self.p}")
            return v.numerator * pow(v.denominator, self.p - 2, self.p) % self.p
        if isinstance(v, int):
            return v % self.p
        raise ValidationError(f"not an F_{self.p} scalar: {v!r}")

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    # arithmetic

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p == 0 else pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def half(self, a):
        return self.div(a, self.of(2))

    def to_str(self, a):
        return str(a)

    def sort_key(self, a):
        # total order used only to make outputs deterministic
        if self.p == 0:
            return (a.numerator, a.denominator)
        return (a, 1)

    def random(self, rng, span=5):
        if self.p == 0:
            return Fraction(rng.randint(-span, span))
        return rng.randrange(self.p)


def square_class(field, c):
    """Square-class key of a nonzero scalar.

    Over F_p: 'square' or 'nonsquare' by Euler's criterion. Over Q: the
    squarefree integer representative of c modulo squares, e.g. -18 -> -2.
    """
    if not c:
        raise ValidationError("square class of zero is undefined")
    if field.p == 0:
        c = Fraction(c)
        return _squarefree_part(c.numerator * c.denominator)
    return "square" if pow(c, (field.p - 1) // 2, field.p) == 1 else "nonsquare"


def same_square_class(field, a, b):
    return square_class(field, a) == square_class(field, b)


def least_nonsquare(field):
    """The smallest nonsquare in F_p; undefined over Q (every class has many)."""
    if field.p == 0:
        raise ValidationError("least nonsquare is a finite-field notion")
    p = field.p
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) != 1:
            return r
    raise ValidationError("no nonsquare found; is p prime?")


def square_class_representative(field, c):
    """Canonical scalar in the square class of c.

    Over Q the squarefree integer itself (as a Fraction); over F_p either
    1 or the least nonsquare. c / representative is always a square in the
    field, so normalizing a value to its representative needs only an
    in-field square root.
    """
    cls = square_class(field, c)
    if field.p == 0:
        return Fraction(cls)
    return field.one if cls == "square" else field.of(least_nonsquare(field))


def sqrt_in_field(field, c):
    """An exact square root of c, or None when c is not a square."""
    if not c:
        return field.zero
    if field.p == 0:
        c = Fraction(c)
        if c < 0:
            return None
        rn, rd = isqrt(c.numerator), isqrt(c.denominator)
        if rn * rn == c.numerator and rd * rd == c.denominator:
            return Fraction(rn, rd)
        return None
    p = field.p
    if pow(c, (p - 1) // 2, p) != 1:
        return None
    # p is small in practice; a scan keeps this dependency-free
    for r in range(1, p):
        if r * r % p == c:
            return r
    return None


class Polynomial:
    """Univariate polynomial, coefficients ascending (coeffs[i] is on x^i)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = [field.of(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def one(cls, field):
        return cls(field, [1])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @property
    def degree(self):
        # zero polynomial gets degree -1
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def lc(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        F = self.field
        return Polynomial(F, [F.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        F = self.field
        if self.is_zero or other.is_zero:
            return Polynomial.zero(F)
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Polynomial(F, out)

    def scale(self, c):
        F = self.field
        return Polynomial(F, [F.mul(F.of(c), a) for a in self.coeffs])

    def divmod(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        d = other.degree
        ilc = F.inv(other.lc())
        quo = [F.zero] * max(0, len(rem) - d)
        for i in range(len(rem) - d - 1, -1, -1):
            c = F.mul(rem[i + d], ilc)
            if not c:
                continue
            quo[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] = F.sub(rem[i + j], F.mul(c, b))
        return Polynomial(F, quo), Polynomial(F, rem[:d])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero or self.is_monic:
            return self
        return self.scale(self.field.inv(self.lc()))

    def derivative(self):
        F = self.field
        return Polynomial(
            F, [F.mul(F.of(i), c) for i, c in enumerate(self.coeffs)][1:]
        )

    def eval(self, c):
        F = self.field
        acc = F.zero
        for a in reversed(self.coeffs):
            acc = F.add(F.mul(acc, F.of(c)), a)
        return acc

    def shift_scale(self, mu):
        """The monic-compatible rescale mu^deg * p(x/mu); coeff a_j -> a_j mu^(d-j)."""
        F = self.field
        d = self.degree
        out = []
        for j, a in enumerate(self.coeffs):
            m = F.one
            for _ in range(d - j):
                m = F.mul(m, F.of(mu))
            out.append(F.mul(a, m))
        return Polynomial(F, out)

    def pow_mod(self, e, modulus):
        result = Polynomial.one(self.field)
        base = self % modulus
        while e:
            if e & 1:
                result = result * base % modulus
            base = base * base % modulus
            e >>= 1
        return result

    def sort_key(self):
        F = self.field
        return (self.degree, tuple(F.sort_key(c) for c in self.coeffs))

    def __str__(self):
        """Signed rendering, highest degree first: x^2 - 3*x + 2."""
        if self.is_zero:
            return "0"
        F = self.field
        out = ""
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if not c:
                continue
            neg = F.p == 0 and c < 0
            mag = F.to_str(F.neg(c) if neg else c)
            if i == 0:
                term = mag
            else:
                xs = "x" if i == 1 else f"x^{i}"
                term = xs if mag == "1" else f"{mag}*{xs}"
            if not out:
                out = f"-{term}" if neg else term
            else:
                out += f" - {term}" if neg else f" + {term}"
        return out

    def __repr__(self):
        return f"Poly({self})"

    def to_json(self):
        return [self.field.to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, field, data):
        return cls(field, [field.of(c) for c in data])


def poly_gcd(a, b):
    """Monic gcd with Bezout pair: returns (g, u, v) with u*a + v*b = g."""
    if a.is_zero and b.is_zero:
        raise ValidationError("gcd of two zero polynomials")
    F = a.field
    r0, r1 = a, b
    u0, u1 = Polynomial.one(F), Polynomial.zero(F)
    v0, v1 = Polynomial.zero(F), Polynomial.one(F)
    while not r1.is_zero:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    c = F.inv(r0.lc())
    return r0.scale(c), u0.scale(c), v0.scale(c)


def poly_lcm(a, b):
    if a.is_zero or b.is_zero:
        return Polynomial.zero(a.field)
    g, _, _ = poly_gcd(a, b)
    return ((a * b) // g).monic()


def poly_star(p):
    """The monic q with q(x) = (-1)^deg p * p(-x); an involution on monics.

    Roots get negated: star pairs the factor of eigenvalue c with that of -c.
    """
    if not p.is_monic:
        raise ValidationError("star is defined for monic polynomials")
    F = p.field
    d = p.degree
    out = []
    for i, c in enumerate(p.coeffs):
        # sign (-1)^(d-i) = (-1)^d * (-1)^i
        out.append(c if (d - i) % 2 == 0 else F.neg(c))
    return Polynomial(F, out)


# factorization over F_p


def _fp_pth_root(f):
    # f' == 0 over F_p means f(x) = h(x^p) and f = h(x)^p coefficientwise
    p = f.field.p
    return Polynomial(f.field, [f.coeff(i) for i in range(0, len(f.coeffs), p)])


def _fp_squarefree(f):
    """[(g, m)] with g monic squarefree, product g^m = f (up to lc)."""
    p = f.field.p
    out = []
    n = 1
    f = f.monic()
    while f.degree > 0:
        d = f.derivative()
        if not d.is_zero:
            g, _, _ = poly_gcd(f, d)
            h = f // g
            i = 1
            while not h.is_one:
                gg, _, _ = poly_gcd(g, h)
                hh = h // gg
                if hh.degree > 0:
                    out.append((hh.monic(), i * n))
                g, h = g // gg, gg
                i += 1
            if g.is_one:
                return out
            f = g
        f = _fp_pth_root(f).monic()
        n *= p
    return out


def _fp_ddf(f):
    """Distinct-degree split of a monic squarefree f: [(product, degree)]."""
    F = f.field
    p = F.p
    out = []
    x = Polynomial.x(F)
    h = x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(p, f)
        g, _, _ = poly_gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _fp_edf(f, d, rng):
    """Equal-degree split: f monic squarefree, all factors of degree d."""
    F = f.field
    p = F.p
    if f.degree == d:
        return [f]
    e = (p**d - 1) // 2
    while True:
        r = Polynomial(F, [rng.randrange(p) for _ in range(f.degree)])
        if r.degree < 1:
            continue
        g, _, _ = poly_gcd(r, f)
        if 0 < g.degree < f.degree:
            break
        s = r.pow_mod(e, f) - Polynomial.one(F)
        g, _, _ = poly_gcd(s, f)
        if 0 < g.degree < f.degree:
            break
    return _fp_edf(g.monic(), d, rng) + _fp_edf((f // g).monic(), d, rng)


def _factor_fp(f, seed):
    rng = random.Random(seed)
    out = []
    for g, m in _fp_squarefree(f):
        for h, d in _fp_ddf(g):
            for irr in _fp_edf(h.monic(), d, rng):
                out.append((irr.monic(), m))
    return out


# factorization over Q: monic shift, factor mod q, Hensel lift, recombine.
# Lifting works on plain int coefficient lists modulo m (ascending order).


def _zm_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zm_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % m
    return _zm_trim(out)


def _zm_add(a, b, m):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)]
    return _zm_trim(out)


def _zm_sub(a, b, m):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)]
    return _zm_trim(out)


def _zm_divmod_monic(a, b, m):
    # b monic; valid over Z/m for any m
    a = list(a)
    db = len(b) - 1
    if len(a) < len(b):
        return [], _zm_trim(a)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - db - 1, -1, -1):
        c = a[i + db] % m
        if not c:
            continue
        quo[i] = c
        for j, y in enumerate(b):
            a[i + j] = (a[i + j] - c * y) % m
    return _zm_trim(quo), _zm_trim(a[:db])


def _hensel_step(f, g, h, s, t, m):
    """One quadratic lift: from f = g*h, s*g + t*h = 1 (mod m) to mod m^2."""
    M = m * m
    e = _zm_sub(f, _zm_mul(g, h, M), M)
    q, r = _zm_divmod_monic(_zm_mul(s, e, M), h, M)
    g1 = _zm_add(g, _zm_add(_zm_mul(t, e, M), _zm_mul(q, g, M), M), M)
    h1 = _zm_add(h, r, M)
    b = _zm_sub(_zm_add(_zm_mul(s, g1, M), _zm_mul(t, h1, M), M), [1], M)
    c, d = _zm_divmod_monic(_zm_mul(s, b, M), h1, M)
    s1 = _zm_sub(s, d, M)
    t1 = _zm_sub(t, _zm_add(_zm_mul(t, b, M), _zm_mul(c, g1, M), M), M)
    return g1, h1, s1, t1


def _lift_pair(f_int, g, h, q, target):
    """Lift f = g*h from mod q to mod m >= target; returns (g, h, m)."""
    Fq = Field(q)
    gq = Polynomial(Fq, g)
    hq = Polynomial(Fq, h)
    one, s, t = poly_gcd(gq, hq)
    if not one.is_one:
        raise ValidationError("modular factors are not coprime")
    s = [int(c) for c in s.coeffs]
    t = [int(c) for c in t.coeffs]
    m = q
    while m < target:
        fm = [c % (m * m) for c in f_int]
        g, h, s, t = _hensel_step(fm, g, h, s, t, m)
        m *= m
    return g, h, m


def _lift_factorization(f_int, factors, q, target):
    """Hensel-lift a list of monic mod-q factors of monic f to mod >= target."""
    if len(factors) == 1:
        m = q
        while m < target:
            m *= m
        return [[c % m for c in f_int]], m
    k = len(factors) // 2
    gs, hs = factors[:k], factors[k:]
    g = [1]
    for a in gs:
        g = _zm_mul(g, a, q) or [0]
    h = [1]
    for a in hs:
        h = _zm_mul(h, a, q) or [0]
    g, h, m = _lift_pair(f_int, g, h, q, target)
    left, _ = _lift_factorization(g, gs, q, target)
    right, _ = _lift_factorization(h, hs, q, target)
    return left + right, m


def _balanced(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _z_poly_divides(g, f):
    # exact division test over Z; g, f int lists, g monic
    rem = list(f)
    dg = len(g) - 1
    if len(rem) < len(g):
        return None
    quo = [0] * (len(rem) - dg)
    for i in range(len(rem) - dg - 1, -1, -1):
        c = rem[i + dg]
        quo[i] = c
        if c:
            for j, y in enumerate(g):
                rem[i + j] -= c * y
    if any(rem[:dg]):
        return None
    return quo


def _factor_monic_squarefree_z(f_int, seed):
    """Irreducible monic integer factors of a monic squarefree f over Z."""
    n = len(f_int) - 1
    if n <= 1:
        return [f_int]
    # prime with squarefree reduction; skips the finitely many bad ones
    q = 3
    while True:
        Fq = Field(q) if _is_prime(q) else None
        if Fq is not None:
            fq = Polynomial(Fq, f_int)
            if fq.degree == n:
                d = fq.derivative()
                if not d.is_zero and poly_gcd(fq, d)[0].is_one:
                    break
        q += 2
    modular = [
        [int(c) for c in g.coeffs]
        for g, _ in sorted(_factor_fp(Polynomial(Fq, f_int), seed), key=lambda t: t[0].sort_key())
    ]
    if len(modular) == 1:
        return [f_int]
    # Landau-Mignotte: factor coefficients are below 2^n * l2norm(f)
    norm = isqrt(sum(c * c for c in f_int)) + 1
    target = 2 * (2**n) * norm + 1
    lifted, m = _lift_factorization(list(f_int), modular, q, target)
    lifted = [[c % m for c in g] for g in lifted]

    from itertools import combinations

    remaining = list(range(len(lifted)))
    f_cur = list(f_int)
    out = []
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for subset in combinations(remaining, size):
            g = [1]
            for i in subset:
                g = _zm_mul(g, lifted[i], m) or [0]
            g = [_balanced(c, m) for c in g]
            if not g or g[-1] != 1:
                continue
            quo = _z_poly_divides(g, f_cur)
            if quo is not None:
                out.append(g)
                f_cur = quo
                remaining = [i for i in remaining if i not in subset]
                hit = True
                break
        if not hit:
            size += 1
    if len(f_cur) > 1:
        out.append(f_cur)
    return out


def _factor_q(f, seed, degree_bound):
    if f.degree > degree_bound:
        raise CapabilityError(
            f"rational factorization capped at degree {degree_bound}"
        )
    F = f.field
    out = []
    # Yun squarefree decomposition, then Zassenhaus on each squarefree part
    fm = f.monic()
    d, _, _ = poly_gcd(fm, fm.derivative())
    parts = []
    if d.degree == 0:
        parts.append((fm, 1))
    else:
        c = fm // d
        w = fm.derivative() // d - c.derivative()
        i = 1
        while c.degree > 0:
            a, _, _ = poly_gcd(c, w)
            if a.degree > 0:
                parts.append((a.monic(), i))
            c = c // a
            w = w // a - c.derivative()
            i += 1
    for g, mult in parts:
        # clear denominators, then shift to a monic integer polynomial
        den = 1
        for c in g.coeffs:
            den = den * c.denominator // _int_gcd(den, c.denominator)
        ints = [int(c * den) for c in g.coeffs]
        content = 0
        for c in ints:
            content = _int_gcd(content, c)
        ints = [c // content for c in ints]
        ell = ints[-1]
        if ell < 0:
            ints = [-c for c in ints]
            ell = -ell
        n = len(ints) - 1
        shifted = [ints[j] * ell ** (n - 1 - j) if j < n else 1 for j in range(n + 1)]
        for gi in _factor_monic_squarefree_z(shifted, seed):
            # undo y = ell*x and re-normalize monic over Q
            dg = len(gi) - 1
            coeffs = [Fraction(gi[j]) * Fraction(ell) ** j for j in range(dg + 1)]
            out.append((Polynomial(F, coeffs).monic(), mult))
    return out


def factor_poly(p, seed=0, degree_bound=16):
    """Factor into monic irreducibles: returns [(factor, multiplicity)].

    The product of factor^multiplicity equals p up to its leading
    coefficient. Randomized splitting over F_p is seeded (default 0) so
    results are reproducible. Over Q the degree is capped (default 16);
    exceeding it raises CapabilityError.
    """
    if p.is_zero:
        raise ValidationError("cannot factor the zero polynomial")
    if p.degree == 0:
        return []
    if p.field.p == 0:
        out = _factor_q(p, seed, degree_bound)
    else:
        out = _factor_fp(p, seed)
    out.sort(key=lambda t: t[0].sort_key())
    return out
