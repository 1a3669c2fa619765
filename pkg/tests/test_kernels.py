"""Kernel parity and correctness against a naive big-integer reference."""

import random

import pytest

from tracepir import kernels
from tracepir.kernels import pure

try:
    from tracepir.kernels import fast
except ImportError:
    fast = None

FIELDS = [(2, 1), (2, 2), (3, 2), (7, 1), (7, 2), (5, 3), (11, 4), (2147483629, 2)]


def ref_reduce(prod, mod, q):
    # long division by the monic modulus over the integers, then mod q
    prod = list(prod)
    s = len(mod) - 1
    for d in range(len(prod) - 1, s - 1, -1):
        c = prod[d]
        if c:
            for j in range(s + 1):
                prod[d - s + j] -= c * mod[j]
    return tuple(c % q for c in prod[:s])


def ref_ext_mul(a, b, mod, q):
    s = len(mod) - 1
    prod = [0] * (2 * s - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    return ref_reduce(prod, mod, q)


def random_modulus(rng, q, s):
    # any monic polynomial works for plain reduction checks
    mod = [rng.randrange(q) for _ in range(s)] + [1]
    red = tuple(-c % q for c in mod[:s])
    return tuple(mod), red


@pytest.mark.parametrize("q,s", FIELDS)
def test_mul_matches_bigint_reference(q, s):
    rng = random.Random(q * 1000 + s)
    mod, red = random_modulus(rng, q, s)
    for _ in range(200):
        a = tuple(rng.randrange(q) for _ in range(s))
        b = tuple(rng.randrange(q) for _ in range(s))
        assert kernels.ext_mul(a, b, red, q) == ref_ext_mul(a, b, mod, q)


@pytest.mark.parametrize("q,s", FIELDS)
def test_dot_matches_bigint_reference(q, s):
    rng = random.Random(q + s)
    mod, red = random_modulus(rng, q, s)
    xs = [tuple(rng.randrange(q) for _ in range(s)) for _ in range(30)]
    ys = [tuple(rng.randrange(q) for _ in range(s)) for _ in range(30)]
    acc = (0,) * s
    for x, y in zip(xs, ys):
        term = ref_ext_mul(x, y, mod, q)
        acc = tuple((u + v) % q for u, v in zip(acc, term))
    assert kernels.ext_dot(xs, ys, red, q) == acc


@pytest.mark.skipif(fast is None, reason="compiled kernel not built")
@pytest.mark.parametrize("q,s", FIELDS)
def test_fast_and_pure_agree(q, s):
    rng = random.Random(s * 77 + q)
    _, red = random_modulus(rng, q, s)
    for _ in range(100):
        a = tuple(rng.randrange(q) for _ in range(s))
        b = tuple(rng.randrange(q) for _ in range(s))
        assert fast.ext_mul(a, b, red, q) == pure.ext_mul(a, b, red, q)
        e = rng.randrange(1 << 40)
        assert fast.ext_pow(a, e, red, q) == pure.ext_pow(a, e, red, q)
    xs = [tuple(rng.randrange(q) for _ in range(s)) for _ in range(25)]
    ys = [tuple(rng.randrange(q) for _ in range(s)) for _ in range(25)]
    assert fast.ext_dot(xs, ys, red, q) == pure.ext_dot(xs, ys, red, q)


def test_mod_inv():
    assert kernels.mod_inv(3, 7) == 5
    for q in (2, 3, 7, 11, 101, 2147483629):
        for a in (1, 2, q - 1, q // 2):
            if a % q == 0:
                continue
            assert kernels.mod_inv(a, q) * a % q == 1
    with pytest.raises(ZeroDivisionError):
        kernels.mod_inv(0, 7)


def test_ext_inv_and_pow():
    q, s = 7, 2
    red = (6, 0)  # xi^2 == -1
    for a in [(1, 0), (0, 1), (3, 5), (6, 6)]:
        inv = kernels.ext_inv(a, red, q)
        assert kernels.ext_mul(a, inv, red, q) == (1, 0)
    with pytest.raises(ZeroDivisionError):
        kernels.ext_inv((0, 0), red, q)
    a = (2, 3)
    assert kernels.ext_pow(a, 0, red, q) == (1, 0)
    assert kernels.ext_pow(a, 1, red, q) == a
    assert kernels.ext_pow(a, 48, red, q) == (1, 0)  # group order q^2 - 1


def test_pure_and_selected_backends_expose_same_surface():
    assert kernels.backend() in ("pure", "fast")
    for name in ("mod_inv", "ext_mul", "ext_pow", "ext_inv", "ext_dot"):
        assert hasattr(pure, name)
        assert hasattr(kernels, name)
