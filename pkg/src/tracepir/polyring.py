"""Dense polynomial helpers over any field context.

A polynomial is a plain Python list of field elements, lowest degree
first, normalized so the last entry is nonzero; the zero polynomial is
the empty list.  Every function takes the field context as its first
argument, so the same code serves base-field polynomials (int
coefficients) and extension-field polynomials (tuple coefficients).
"""


def normalize(field, coeffs):
    out = list(coeffs)
    while out and out[-1] == field.zero:
        out.pop()
    return out


def degree(coeffs) -> int:
    """Degree of a normalized polynomial; -1 for the zero polynomial."""
    return len(coeffs) - 1


def poly_add(field, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return normalize(field, out)


def poly_sub(field, a, b):
    out = list(a) + [field.zero] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = field.sub(out[i], c)
    return normalize(field, out)


def poly_neg(field, a):
    return [field.neg(c) for c in a]


def poly_scale(field, c, a):
    if c == field.zero:
        return []
    return normalize(field, [field.mul(c, x) for x in a])


def poly_mul(field, a, b):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == field.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return normalize(field, out)


def poly_eval(field, coeffs, x):
    acc = field.zero
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def poly_divmod(field, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv_lead = field.inv(b[-1])
    for i in range(len(rem) - len(b), -1, -1):
        factor = field.mul(rem[i + len(b) - 1], inv_lead)
        if factor == field.zero:
            continue
        quo[i] = factor
        for j, c in enumerate(b):
            rem[i + j] = field.sub(rem[i + j], field.mul(factor, c))
    return normalize(field, quo), normalize(field, rem)


def poly_mod(field, a, b):
    return poly_divmod(field, a, b)[1]


def monic(field, a):
    if not a:
        return []
    if a[-1] == field.one:
        return list(a)
    return poly_scale(field, field.inv(a[-1]), a)


def poly_gcd(field, a, b):
    a, b = normalize(field, a), normalize(field, b)
    while b:
        a, b = b, poly_mod(field, a, b)
    return monic(field, a)


def poly_powmod(field, base, e: int, mod):
    """base^e reduced modulo mod, square-and-multiply."""
    if e < 0:
        raise ValueError("negative exponent")
    result = [field.one]
    base = poly_mod(field, base, mod)
    while e:
        if e & 1:
            result = poly_mod(field, poly_mul(field, result, base), mod)
        base = poly_mod(field, poly_mul(field, base, base), mod)
        e >>= 1
    return result


def from_roots(field, roots):
    """Monic polynomial with exactly the given roots (with multiplicity)."""
    out = [field.one]
    for r in roots:
        out = poly_mul(field, out, [field.neg(r), field.one])
    return out
