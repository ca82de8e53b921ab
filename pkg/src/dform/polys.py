"""Dense univariate polynomials over a field, as coefficient tuples (low degree first).

Coefficients are field elements supporting the usual operators; the zero
polynomial is the empty tuple. Used for finite-field moduli and for the
rational function fields F_q(t).
"""

from itertools import product


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def deg(a):
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def neg(a):
    return tuple(-c for c in a)


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    if c == 0:
        return ()
    return trim(x * c for x in a)


def mul(a, b):
    if not a or not b:
        return ()
    zero = a[0] * 0
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def power(a, k):
    result = (a[0] ** 0,) if a else ()
    if k == 0:
        return result
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def divmod_(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = 1 / b[-1]
    r = list(a)
    if len(r) < len(b):
        return (), trim(r)
    q = [b[0] * 0] * (len(r) - len(b) + 1)
    for i in range(len(r) - len(b), -1, -1):
        c = r[i + len(b) - 1] * inv
        q[i] = c
        if c != 0:
            for j, y in enumerate(b):
                r[i + j] = r[i + j] - c * y
    return trim(q), trim(r[: len(b) - 1])


def monic(a):
    if not a:
        return a
    return scale(a, 1 / a[-1])


def gcd(a, b):
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def evaluate(a, x):
    acc = x * 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def monic_polys(field, degree):
    """All monic polynomials of the given degree, ordered lexicographically
    by (c_{n-1}, ..., c_0) with elements compared by their encoding."""
    elems = list(field.elements())
    one = field.one
    for digits in product(elems, repeat=degree):
        yield tuple(reversed(digits)) + (one,)


def is_irreducible(a, field):
    n = deg(a)
    if n <= 0:
        return False
    for k in range(1, n // 2 + 1):
        for f in monic_polys(field, k):
            if not divmod_(a, f)[1]:
                return False
    return True


def irreducibles(field, degree):
    for f in monic_polys(field, degree):
        if is_irreducible(f, field):
            yield f


def factor(a, field):
    """Return (leading coefficient, [(monic irreducible, multiplicity), ...])."""
    if not a:
        raise ValueError("cannot factor the zero polynomial")
    lead = a[-1]
    rest = monic(a)
    factors = []
    k = 1
    while deg(rest) > 0:
        if 2 * k > deg(rest):
            factors.append((rest, 1))
            break
        for f in irreducibles(field, k):
            m = 0
            while True:
                q, r = divmod_(rest, f)
                if r:
                    break
                rest, m = q, m + 1
            if m:
                factors.append((f, m))
        k += 1
    factors.sort(key=lambda fm: (deg(fm[0]), [field.encode(c) for c in reversed(fm[0])]))
    return lead, factors
