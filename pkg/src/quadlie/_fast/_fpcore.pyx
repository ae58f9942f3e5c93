# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p kernels.

Must stay entry-for-entry equivalent to quadlie._fast.pure, including the
pivot order, so the two backends are interchangeable under the suite.
Entries arrive reduced into [0, p); p*p must fit a 64-bit signed product.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"


cdef long long _pw(long long b, long long e, long long p):
    cdef long long r = 1
    b %= p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


cdef long long *_load(obj, Py_ssize_t n) except NULL:
    cdef long long *buf = <long long *>malloc((n if n else 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = obj[i]
    return buf


def fp_rref(mat, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    """Reduced row echelon form. Returns (flat matrix, pivot columns, rank)."""
    cdef Py_ssize_t n = nrows * ncols
    cdef long long *m = _load(mat, n)
    cdef Py_ssize_t i, j, c, pr, r
    cdef long long inv, f, v, tmp
    pivots = []
    r = 0
    try:
        for c in range(ncols):
            if r == nrows:
                break
            pr = -1
            for i in range(r, nrows):
                if m[i * ncols + c]:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(ncols):
                    tmp = m[r * ncols + j]
                    m[r * ncols + j] = m[pr * ncols + j]
                    m[pr * ncols + j] = tmp
            inv = _pw(m[r * ncols + c], p - 2, p)
            if inv != 1:
                for j in range(ncols):
                    m[r * ncols + j] = m[r * ncols + j] * inv % p
            for i in range(nrows):
                f = m[i * ncols + c]
                if i == r or f == 0:
                    continue
                for j in range(ncols):
                    v = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                    if v < 0:
                        v += p
                    m[i * ncols + j] = v
            pivots.append(c)
            r += 1
        out = [0] * n
        for i in range(n):
            out[i] = m[i]
        return out, pivots, r
    finally:
        free(m)


def fp_matmul(a, Py_ssize_t n, Py_ssize_t k, b, Py_ssize_t k2, Py_ssize_t m, long long p):
    """Flat (n x k) times (k x m) product mod p."""
    if k != k2:
        raise ValueError("inner dimensions differ")
    cdef long long *abuf = _load(a, n * k)
    cdef long long *bbuf = NULL
    cdef long long *obuf = NULL
    cdef Py_ssize_t i, j, t, orow, brow
    cdef long long av
    try:
        bbuf = _load(b, k * m)
        obuf = <long long *>malloc((n * m if n * m else 1) * sizeof(long long))
        if obuf == NULL:
            raise MemoryError()
        for i in range(n * m):
            obuf[i] = 0
        for i in range(n):
            orow = i * m
            for t in range(k):
                av = abuf[i * k + t]
                if av == 0:
                    continue
                brow = t * m
                for j in range(m):
                    obuf[orow + j] = (obuf[orow + j] + av * bbuf[brow + j]) % p
        out = [0] * (n * m)
        for i in range(n * m):
            out[i] = obuf[i]
        return out
    finally:
        free(abuf)
        free(bbuf)
        free(obuf)
