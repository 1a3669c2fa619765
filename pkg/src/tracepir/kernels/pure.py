"""Pure-Python arithmetic kernel.

Reference implementation of the low-level field primitives; the compiled
module ``tracepir.kernels.fast`` mirrors this surface exactly.  Extension
field elements are tuples of ints in [0, q), index d holding the
coefficient of xi^d.  ``red`` is the reduction vector of the monic
construction modulus: the length-s tuple with xi^s == red (as an element).
"""

MAX_DEGREE = 64


def mod_inv(a: int, q: int) -> int:
    """Inverse of a modulo the prime q (extended Euclid)."""
    a %= q
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    lo, hi = a, q
    lm, hm = 1, 0
    while lo > 1:
        r = hi // lo
        lm, hm = hm - lm * r, lm
        lo, hi = hi - lo * r, lo
    return lm % q


def _reduce(prod: list, red: tuple, q: int) -> tuple:
    # prod has length 2s-1; fold degrees >= s down using xi^s == red.
    s = len(red)
    for d in range(2 * s - 2, s - 1, -1):
        c = prod[d] % q
        if c:
            base = d - s
            for j, rj in enumerate(red):
                if rj:
                    prod[base + j] = (prod[base + j] + c * rj) % q
    return tuple(c % q for c in prod[:s])


def ext_mul(a: tuple, b: tuple, red: tuple, q: int) -> tuple:
    s = len(red)
    if s > MAX_DEGREE:
        raise ValueError("extension degree above kernel limit")
    if len(a) != s or len(b) != s:
        raise ValueError("element length does not match field degree")
    if s == 1:
        return ((a[0] * b[0]) % q,)
    prod = [0] * (2 * s - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    return _reduce(prod, red, q)


def ext_pow(a: tuple, e: int, red: tuple, q: int) -> tuple:
    if e < 0:
        raise ValueError("negative exponent")
    s = len(red)
    out = (1,) + (0,) * (s - 1)
    base = tuple(c % q for c in a)
    while e:
        if e & 1:
            out = ext_mul(out, base, red, q)
        base = ext_mul(base, base, red, q)
        e >>= 1
    return out


def ext_inv(a: tuple, red: tuple, q: int) -> tuple:
    if not any(c % q for c in a):
        raise ZeroDivisionError("inverse of zero")
    s = len(red)
    return ext_pow(a, q**s - 2, red, q)


def ext_dot(xs, ys, red: tuple, q: int) -> tuple:
    """Sum of pairwise products: an unreduced accumulate, one final fold."""
    s = len(red)
    if s > MAX_DEGREE:
        raise ValueError("extension degree above kernel limit")
    if s == 1:
        acc = 0
        for x, y in zip(xs, ys, strict=True):
            acc += x[0] * y[0]
        return (acc % q,)
    prod = [0] * (2 * s - 1)
    for x, y in zip(xs, ys, strict=True):
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        prod[i + j] += xi * yj
    return _reduce(prod, red, q)
