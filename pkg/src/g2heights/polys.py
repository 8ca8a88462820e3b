"""Dense univariate polynomial helpers over a duck-typed field.

Polynomials are plain lists of field elements, constant term first, with no
trailing zeros (the zero polynomial is the empty list).
"""

from __future__ import annotations

from fractions import Fraction


def trim(F, c):
    c = list(c)
    while c and F.is_zero(c[-1]):
        c.pop()
    return c


def deg(c):
    return len(c) - 1  # -1 for the zero polynomial


def const(F, a):
    return trim(F, [F.coerce(a)])


def add(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.add(x, y))
    return trim(F, out)


def sub(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.sub(x, y))
    return trim(F, out)


def neg(F, a):
    return [F.neg(x) for x in a]


def scal(F, c, a):
    if F.is_zero(c):
        return []
    return trim(F, [F.mul(c, x) for x in a])


def mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not F.is_zero(x):
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(F, out)


def divmod_(F, a, b):
    # structural synthetic division: the top coefficient is dropped by
    # position, not by a zero test, so inexact (floating) fields terminate
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    if len(a) < len(b):
        return [], trim(F, a)
    q = [F.zero] * (len(a) - len(b) + 1)
    inv = F.inv(b[-1])
    for d in range(len(a) - len(b), -1, -1):
        c = F.mul(a[d + len(b) - 1], inv)
        if not F.is_zero(c):
            q[d] = c
            for i, y in enumerate(b):
                a[d + i] = F.sub(a[d + i], F.mul(c, y))
    return trim(F, q), trim(F, a[:len(b) - 1])


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def monic(F, a):
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(inv, x) for x in a]


def gcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def xgcd(F, a, b):
    """Return (g, s, t) monic with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = const(F, 1), []
    t0, t1 = [], const(F, 1)
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if r0:
        inv = F.inv(r0[-1])
        r0 = [F.mul(inv, x) for x in r0]
        s0 = [F.mul(inv, x) for x in s0]
        t0 = [F.mul(inv, x) for x in t0]
    return r0, s0, t0


def evaluate(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F, a):
    return trim(F, [F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def shift(F, a, r):
    """a(x + r)."""
    out = []
    for c in reversed(a):
        out = add(F, mul(F, out, [r, F.one]), [c])
    return out


# ---------------------------------------------------------------------------
# Integer-coefficient resultants (exact, subresultant PRS)


def _bareiss_det(M):
    """Fraction-free determinant of a square integer matrix."""
    M = [row[:] for row in M]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def int_resultant(a, b):
    """Resultant of integer polynomials (degrees = len-1 after trimming)."""
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a or not b:
        return 0
    m, n = len(a) - 1, len(b) - 1
    if m == 0:
        return a[0] ** n
    if n == 0:
        return b[0] ** m
    # Sylvester matrix, rows of a (n of them) then rows of b (m of them)
    size = m + n
    M = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(n):
        M.append([0] * i + ra + [0] * (size - m - 1 - i))
    for i in range(m):
        M.append([0] * i + rb + [0] * (size - n - 1 - i))
    return _bareiss_det(M)


def int_discriminant(f):
    """Discriminant of an integer polynomial of its listed degree.

    disc(f) = (-1)^(n(n-1)/2) / lc(f) * Res(f, f'), with the convention that the
    degree n is len(f)-1 (trailing zeros must be trimmed by the caller).
    """
    f = [int(x) for x in f]
    while f and f[-1] == 0:
        f.pop()
    n = len(f) - 1
    if n < 1:
        return 0
    fp = [i * f[i] for i in range(1, len(f))]
    r = int_resultant(f, fp)
    sign = (-1) ** (n * (n - 1) // 2)
    q, rem = divmod(sign * r, f[-1])
    assert rem == 0
    return q


def frac_discriminant(f):
    """Discriminant of a Fraction-coefficient polynomial (degree = len-1)."""
    f = [Fraction(x) for x in f]
    while f and f[-1] == 0:
        f.pop()
    if len(f) < 2:
        return Fraction(0)
    den = _lcm_all([c.denominator for c in f])
    g = [int(c * den) for c in f]
    n = len(g) - 1
    # disc scales by den^(2n-2) when clearing denominators
    return Fraction(int_discriminant(g), den ** (2 * n - 2))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm_all(xs):
    out = 1
    for x in xs:
        out = out * x // _gcd(out, x)
    return out
