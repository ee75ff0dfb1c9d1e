"""Exact polynomial arithmetic over Gaussian rationals.

Coefficients are tuples in low-to-high order.  Used for the square-free
multiplicity cross-check; speed is irrelevant at the degrees in scope.
"""

from __future__ import annotations

from .scalars import EX_ONE, EX_ZERO, ExactComplex, to_exact


def trim(c):
    c = list(c)
    while c and c[-1].is_zero:
        c.pop()
    return tuple(c)


def degree(c) -> int:
    return len(c) - 1  # zero polynomial: -1


def add(a, b):
    m = max(len(a), len(b))
    return trim(
        (a[i] if i < len(a) else EX_ZERO) + (b[i] if i < len(b) else EX_ZERO)
        for i in range(m)
    )


def sub(a, b):
    m = max(len(a), len(b))
    return trim(
        (a[i] if i < len(a) else EX_ZERO) - (b[i] if i < len(b) else EX_ZERO)
        for i in range(m)
    )


def mul(a, b):
    if not a or not b:
        return ()
    out = [EX_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return trim(out)


def scalar_mul(c, a):
    c = to_exact(c)
    return trim(c * x for x in a)


def divmod_poly(a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(trim(a))
    q = [EX_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        factor = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = factor
        for i in range(len(b)):
            a[shift + i] = a[shift + i] - factor * b[i]
        while a and a[-1].is_zero:
            a.pop()
    return trim(q), tuple(a)


def monic(a):
    a = trim(a)
    if not a:
        return a
    lead = a[-1]
    if lead == EX_ONE:
        return a
    return tuple(x / lead for x in a)


def derivative(a):
    return trim(to_exact(i) * a[i] for i in range(1, len(a)))


def gcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def square_free_decomposition(f):
    """Yun's algorithm: return [(factor, multiplicity)] with factors monic,
    square-free, pairwise coprime, and prod factor^mult == monic(f)."""
    f = monic(f)
    if degree(f) < 1:
        return []
    df = derivative(f)
    g = gcd(f, df)
    if degree(g) == 0:
        return [(f, 1)]
    w, _ = divmod_poly(f, g)
    y, _ = divmod_poly(df, g)
    out = []
    i = 1
    while degree(w) > 0:
        z = sub(y, derivative(w))
        h = gcd(w, z)
        if degree(h) > 0:
            out.append((h, i))
        w, _ = divmod_poly(w, h)
        y, _ = divmod_poly(z, h)
        i += 1
    return out
