"""Field abstraction shared by the divisor arithmetic.

Three concrete fields: exact rationals (Fraction), prime fields F_p (ints mod p,
test/interpolation use), and rational functions Q(t). They all expose the same
small duck-typed interface so the Cantor code in jacobian.py is written once.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class QQ:
    """The rational numbers, elements are Fraction (or int, coerced on entry)."""

    name = "Q"

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, a):
        return a if isinstance(a, Fraction) else Fraction(a)

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return Fraction(a) / b

    def inv(self, a):
        return Fraction(1) / a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def sqrt(self, a):
        """Exact square root, or None if a is not a square."""
        a = Fraction(a)
        if a < 0:
            return None
        rn = isqrt(a.numerator)
        rd = isqrt(a.denominator)
        if rn * rn == a.numerator and rd * rd == a.denominator:
            return Fraction(rn, rd)
        return None


class FpField:
    """Prime field F_p; elements are ints in [0, p)."""

    def __init__(self, p):
        self.p = p
        self.name = "F%d" % p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n):
        return n % self.p

    coerce = from_int

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def is_square(self, a):
        a %= self.p
        if a == 0:
            return True
        if self.p == 2:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        """Tonelli-Shanks; None if a is a nonresidue."""
        p = self.p
        a %= p
        if a == 0:
            return 0
        if p == 2:
            return a
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # general case
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    def rand(self, rng):
        return rng.randrange(self.p)


class FqField:
    """F_{p^k} as polynomials mod a random irreducible; elements are tuples.

    Minimal support for point counting: arithmetic, pow, chi (quadratic
    character), iteration over all elements.
    """

    def __init__(self, p, k):
        self.p = p
        self.k = k
        self.q = p**k
        self.name = "F%d" % self.q
        self.zero = (0,) * k
        self.one = tuple([1 % p] + [0] * (k - 1))
        self.modulus = self._find_irreducible()

    def _find_irreducible(self):
        if self.k == 1:
            return [0, 1]
        # deterministic scan over monic polynomials of degree k
        p, k = self.p, self.k
        for code in range(p**k):
            c, rest = [], code
            for _ in range(k):
                c.append(rest % p)
                rest //= p
            c.append(1)
            if self._is_irreducible(c):
                return c
        raise RuntimeError("no irreducible polynomial found")  # unreachable

    def _is_irreducible(self, c):
        # standard criterion: x^(p^k) == x mod c, and x^(p^(k/d)) != x for
        # every prime d dividing k
        p, k = self.p, len(c) - 1
        Fp = FpField(p)
        from . import polys as P

        cpoly = P.trim(Fp, [x % p for x in c])

        def frob_iter(j):
            t = [0, 1]
            for _ in range(j):
                t = self._powmod_frob(t, cpoly, Fp)
            return t

        if P.trim(Fp, P.sub(Fp, frob_iter(k), [0, 1])):
            return False
        for d in self._prime_divisors(k):
            if not P.trim(Fp, P.sub(Fp, frob_iter(k // d), [0, 1])):
                return False
        return True

    def _powmod_frob(self, a, cpoly, Fp):
        from . import polys as P

        r = P.const(Fp, 1)
        e = self.p
        base = list(a)
        while e:
            if e & 1:
                r = P.mod(Fp, P.mul(Fp, r, base), cpoly)
            base = P.mod(Fp, P.mul(Fp, base, base), cpoly)
            e >>= 1
        return r

    @staticmethod
    def _prime_divisors(n):
        out, d = [], 2
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            out.append(n)
        return out

    def elements(self):
        p, k = self.p, self.k
        for code in range(self.q):
            c, rest = [], code
            for _ in range(k):
                c.append(rest % p)
                rest //= p
            yield tuple(c)

    def from_int(self, n):
        return tuple([n % self.p] + [0] * (self.k - 1))

    coerce = from_int

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        out = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        # reduce by the monic modulus
        m = self.modulus
        for i in range(len(out) - 1, k - 1, -1):
            c = out[i]
            if c:
                for j in range(k + 1):
                    out[i - k + j] = (out[i - k + j] - c * m[j]) % p
        return tuple(out[:k])

    def is_zero(self, a):
        return all(x % self.p == 0 for x in a)

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def pow(self, a, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def chi(self, a):
        """Quadratic character: 1 square, -1 nonsquare, 0 zero (odd q)."""
        if self.is_zero(a):
            return 0
        t = self.pow(a, (self.q - 1) // 2)
        return 1 if t == self.one else -1

    def inv(self, a):
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))


# ---------------------------------------------------------------------------
# Rational functions Q(t)


def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pneg(a):
    return [-x for x in a]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b):
        c = a[-1] * inv
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] -= c * y
        _ptrim(a)
        if not a:
            break
    return q, a


def _pgcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if a:
        inv = 1 / a[-1]
        a = [x * inv for x in a]
    return a


def _pcontent_free(num, den):
    """Cancel gcd and normalize denominator monic."""
    g = _pgcd(num, den)
    if len(g) > 1:
        num = _pdivmod(num, g)[0]
        den = _pdivmod(den, g)[0]
    if den and den[-1] != 1:
        inv = 1 / den[-1]
        num = [x * inv for x in num]
        den = [x * inv for x in den]
    return num, den


class RatFunc:
    """An element of Q(t): numerator/denominator, Fraction coefficient lists."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunc):
            self.num, self.den = num.num, num.den
            return
        if isinstance(num, (int, Fraction)):
            num = [Fraction(num)] if num else []
        num = _ptrim([Fraction(x) for x in num])
        if den is None:
            den = [Fraction(1)]
        elif isinstance(den, (int, Fraction)):
            den = [Fraction(den)]
        else:
            den = _ptrim([Fraction(x) for x in den])
        if not den:
            raise ZeroDivisionError("zero denominator in Q(t)")
        self.num, self.den = _pcontent_free(num, den)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num), tuple(self.den)))

    def __repr__(self):
        def fmt(c):
            return "+".join("%s*t^%d" % (x, i) for i, x in enumerate(c) if x) or "0"

        if self.den == [Fraction(1)]:
            return fmt(self.num)
        return "(%s)/(%s)" % (fmt(self.num), fmt(self.den))

    def __call__(self, t):
        """Evaluate at a rational t (den must not vanish)."""
        t = Fraction(t)
        n = sum(c * t**i for i, c in enumerate(self.num)) if self.num else Fraction(0)
        d = sum(c * t**i for i, c in enumerate(self.den))
        return n / d


class QTField:
    """The field Q(t) of rational functions."""

    name = "Q(t)"

    zero = RatFunc(0)
    one = RatFunc(1)

    def from_int(self, n):
        return RatFunc(n)

    def coerce(self, a):
        return a if isinstance(a, RatFunc) else RatFunc(a)

    def add(self, a, b):
        return RatFunc(_padd(_pmul(a.num, b.den), _pmul(b.num, a.den)),
                       _pmul(a.den, b.den))

    def sub(self, a, b):
        return RatFunc(_padd(_pmul(a.num, b.den), _pneg(_pmul(b.num, a.den))),
                       _pmul(a.den, b.den))

    def mul(self, a, b):
        return RatFunc(_pmul(a.num, b.num), _pmul(a.den, b.den))

    def neg(self, a):
        return RatFunc(_pneg(a.num), a.den)

    def div(self, a, b):
        if not b.num:
            raise ZeroDivisionError
        return RatFunc(_pmul(a.num, b.den), _pmul(a.den, b.num))

    def inv(self, a):
        return self.div(self.one, a)

    def is_zero(self, a):
        return not a.num

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def sqrt(self, a):
        return None  # not needed over Q(t)


QQ_FIELD = QQ()
QT_FIELD = QTField()
