# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernel.

Same surface and semantics as ``tracepir.kernels.pure``.  Coefficients are
kept below q <= 2^31, so a single int64 product never overflows and sums
are reduced eagerly.
"""

from libc.stdint cimport int64_t

cdef enum:
    MAXS = 64  # keep in sync with pure.MAX_DEGREE

MAX_DEGREE = MAXS


cdef int64_t _inv_ll(int64_t a, int64_t q) except? -1:
    cdef int64_t lo, hi, lm, hm, r, t
    a = a % q
    if a < 0:
        a += q
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    lo = a; hi = q; lm = 1; hm = 0
    while lo > 1:
        r = hi / lo
        t = hm - lm * r; hm = lm; lm = t
        t = hi - lo * r; hi = lo; lo = t
    lm %= q
    if lm < 0:
        lm += q
    return lm


def mod_inv(a, q):
    """Inverse of a modulo the prime q (extended Euclid)."""
    return _inv_ll(a, q)


cdef int _load(object elem, int64_t* buf, int s, int64_t q) except -1:
    cdef int i
    if len(elem) != s:
        raise ValueError("element length does not match field degree")
    for i in range(s):
        buf[i] = elem[i] % q
    return 0


cdef void _mul_core(int64_t* a, int64_t* b, int64_t* red, int64_t q,
                    int s, int64_t* out) noexcept:
    cdef int64_t prod[2 * MAXS]
    cdef int i, j, d
    cdef int64_t c
    if s == 1:
        out[0] = (a[0] * b[0]) % q
        return
    for d in range(2 * s - 1):
        prod[d] = 0
    for i in range(s):
        if a[i]:
            for j in range(s):
                if b[j]:
                    prod[i + j] = (prod[i + j] + a[i] * b[j]) % q
    for d in range(2 * s - 2, s - 1, -1):
        c = prod[d]
        if c:
            for j in range(s):
                if red[j]:
                    prod[d - s + j] = (prod[d - s + j] + c * red[j]) % q
    for i in range(s):
        out[i] = prod[i]


cdef int _setup(object red, int64_t* rbuf, int64_t q) except -1:
    cdef int s = len(red)
    cdef int i
    if s > MAXS:
        raise ValueError("extension degree above kernel limit")
    for i in range(s):
        rbuf[i] = red[i] % q
    return s


def ext_mul(a, b, red, q):
    cdef int64_t abuf[MAXS]
    cdef int64_t bbuf[MAXS]
    cdef int64_t rbuf[MAXS]
    cdef int64_t obuf[MAXS]
    cdef int64_t qq = q
    cdef int s = _setup(red, rbuf, qq)
    _load(a, abuf, s, qq)
    _load(b, bbuf, s, qq)
    _mul_core(abuf, bbuf, rbuf, qq, s, obuf)
    return tuple([obuf[i] for i in range(s)])


def ext_pow(a, e, red, q):
    cdef int64_t base[MAXS]
    cdef int64_t out[MAXS]
    cdef int64_t tmp[MAXS]
    cdef int64_t rbuf[MAXS]
    cdef int64_t qq = q
    cdef int s = _setup(red, rbuf, qq)
    cdef int i
    if e < 0:
        raise ValueError("negative exponent")
    _load(a, base, s, qq)
    out[0] = 1
    for i in range(1, s):
        out[i] = 0
    # e stays a Python int: exponents such as q^s - 2 may exceed 64 bits
    # for parameter probing even though field sizes are capped elsewhere.
    while e:
        if e & 1:
            _mul_core(out, base, rbuf, qq, s, tmp)
            for i in range(s):
                out[i] = tmp[i]
        _mul_core(base, base, rbuf, qq, s, tmp)
        for i in range(s):
            base[i] = tmp[i]
        e >>= 1
    return tuple([out[i] for i in range(s)])


def ext_inv(a, red, q):
    cdef int i
    for i in range(len(a)):
        if a[i] % q:
            break
    else:
        raise ZeroDivisionError("inverse of zero")
    return ext_pow(a, q ** len(red) - 2, red, q)


def ext_dot(xs, ys, red, q):
    """Sum of pairwise products: accumulate with eager reduction, one fold."""
    cdef int64_t prod[2 * MAXS]
    cdef int64_t xbuf[MAXS]
    cdef int64_t ybuf[MAXS]
    cdef int64_t rbuf[MAXS]
    cdef int64_t qq = q
    cdef int s = _setup(red, rbuf, qq)
    cdef int i, j, d
    cdef int64_t c
    if len(xs) != len(ys):
        raise ValueError("zip() argument lengths differ")
    for d in range(2 * s - 1):
        prod[d] = 0
    for n in range(len(xs)):
        _load(xs[n], xbuf, s, qq)
        _load(ys[n], ybuf, s, qq)
        for i in range(s):
            if xbuf[i]:
                for j in range(s):
                    if ybuf[j]:
                        prod[i + j] = (prod[i + j] + xbuf[i] * ybuf[j]) % qq
    for d in range(2 * s - 2, s - 1, -1):
        c = prod[d]
        if c:
            for j in range(s):
                if rbuf[j]:
                    prod[d - s + j] = (prod[d - s + j] + c * rbuf[j]) % qq
    return tuple([prod[i] for i in range(s)])
