"""Truncated arithmetic in the completion at a non-archimedean place.

Elements carry (unit representative mod pi^n, valuation offset, precision n):
the value is u·pi^v + O(pi^(v+n)).  A vanishing unit means "zero to the stated
precision", i.e. the value is O(pi^v) and only a lower bound on the valuation
is known.  Every operation tracks worst-case precision loss, so valuation
queries either return an exact integer or raise PrecisionExhausted.

Two uniformizer backends: a rational prime p (representatives are integers mod
p^n) and a monic irreducible pi(t) over Q (representatives are polynomials mod
pi^n with exact rational coefficients).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionExhausted
from .fields import RatFunc, _padd, _pdivmod, _pmul, _pneg, _ptrim

_EXACT = 10**9  # precision marker for exactly-known elements (exact zeros)


class ZpArith:
    """Residue arithmetic mod p^k with integer representatives."""

    def __init__(self, p):
        self.p = p
        self.zero_r = 0

    def red(self, r, k):
        return r % self.p**k

    def mul(self, a, b):
        return a * b

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def is0(self, r):
        return r == 0

    def mulmod(self, a, b, k):
        return a * b % self.p**k

    def shift_up(self, r, s):
        return r * self.p**s

    def val_unit(self, r, cap):
        """(v, u) with r = p^v·u mod p^cap, u a unit; (cap, 0) if r ≡ 0."""
        r %= self.p**cap
        if r == 0:
            return cap, 0
        v = 0
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v, r

    def from_exact(self, x, k):
        """Reduce a p-integral Fraction mod p^k."""
        x = Fraction(x)
        m = self.p**k
        den = x.denominator % m
        return x.numerator * pow(den, -1, m) % m


class PolyArith:
    """Residue arithmetic mod pi(t)^k with Fraction-coefficient polynomials."""

    def __init__(self, pi):
        self.pi = [Fraction(c) for c in pi]
        self.zero_r = []
        self._pows = [[Fraction(1)]]

    def _pipow(self, k):
        while len(self._pows) <= k:
            self._pows.append(_pmul(self._pows[-1], self.pi))
        return self._pows[k]

    def red(self, r, k):
        return _pdivmod(list(r), self._pipow(k))[1] if r else []

    def mul(self, a, b):
        return _pmul(a, b)

    def mulmod(self, a, b, k):
        return self.red(_pmul(a, b), k)

    def shift_up(self, r, s):
        return _pmul(r, self._pipow(s))

    def add(self, a, b):
        return _padd(a, b)

    def neg(self, a):
        return _pneg(a)

    def is0(self, r):
        return not _ptrim(list(r))

    def val_unit(self, r, cap):
        r = self.red(r, cap)
        if not r:
            return cap, []
        v = 0
        while True:
            q, rem = _pdivmod(list(r), self.pi)
            if _ptrim(rem):
                return v, r
            r = q
            v += 1
            if v >= cap:
                return cap, []

    def from_exact(self, x, k):
        """Reduce a pi-integral element of Q(t) mod pi^k."""
        if isinstance(x, (int, Fraction)):
            x = RatFunc(x)
        num, den = list(x.num), list(x.den)
        mod = self._pipow(k)
        inv = _poly_invmod(den, mod)
        return self.red(_pmul(num, inv), k)


def _poly_invmod(a, mod):
    """Inverse of a mod the polynomial mod (extended Euclid over Q)."""
    r0, r1 = list(mod), _pdivmod(list(a), mod)[1]
    t0, t1 = [], [Fraction(1)]
    while _ptrim(list(r1)):
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _padd(t0, _pneg(_pmul(q, t1)))
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible at the place")
    inv_lc = 1 / r0[0]
    return [c * inv_lc for c in t0]


class TaylorArith:
    """Residue arithmetic mod (t−a)^k for a linear place, as truncated Taylor
    series in u = t−a (coefficient lists, ascending)."""

    def __init__(self, a):
        self.a = Fraction(a)
        self.zero_r = []

    def red(self, r, k):
        r = list(r[:k])
        while r and r[-1] == 0:
            r.pop()
        return r

    def mul(self, a, b):
        # callers always reduce afterwards; keep full product here
        return _pmul(a, b)

    def mulmod(self, a, b, k):
        if not a or not b:
            return []
        out = [Fraction(0)] * min(k, len(a) + len(b) - 1)
        for i, xi in enumerate(a):
            if not xi or i >= k:
                continue
            for j, yj in enumerate(b):
                if i + j >= k:
                    break
                if yj:
                    out[i + j] += xi * yj
        return self.red(out, k)

    def add(self, a, b):
        return _padd(a, b)

    def neg(self, a):
        return _pneg(a)

    def is0(self, r):
        return not _ptrim(list(r))

    def shift_up(self, r, s):
        return [Fraction(0)] * s + list(r)

    def val_unit(self, r, cap):
        r = self.red(r, cap)
        v = 0
        while v < len(r) and r[v] == 0:
            v += 1
        if v >= len(r):
            return cap, []
        return v, r[v:]

    def from_exact(self, x, k):
        if isinstance(x, (int, Fraction)):
            x = RatFunc(x)
        num = _taylor_shift(list(x.num), self.a)
        den = _taylor_shift(list(x.den), self.a)
        inv = _series_inv(den, k + len(num))
        return self.red(self.mulmod(num, inv, k + len(num)), k)


def _taylor_shift(c, a):
    """p(t) ↦ p(u + a) (recentre at the place t = a)."""
    if a == 0:
        return list(c)
    out = []
    for co in reversed(c):  # Horner in (u + a)
        # out := out·(u + a) + co
        new = [Fraction(0)] * (len(out) + 1)
        for i, x in enumerate(out):
            new[i] += x * a
            new[i + 1] += x
        new[0] += co
        out = _ptrim(new)
    return out


def _series_inv(d, k):
    """1/d(u) as a power series mod u^k; d(0) must be nonzero."""
    if not d or d[0] == 0:
        raise ZeroDivisionError("element not invertible at the place")
    inv0 = Fraction(1) / d[0]
    out = [inv0]
    for n in range(1, k):
        s = Fraction(0)
        for i in range(1, min(n, len(d) - 1) + 1):
            s += d[i] * out[n - i]
        out.append(-inv0 * s)
    return out


class TElt:
    """u·pi^v + O(pi^(v+n)); u falsy ⟹ value is O(pi^v) (bound only)."""

    __slots__ = ("u", "v", "n")

    def __init__(self, u, v, n):
        self.u = u
        self.v = v
        self.n = n

    def __repr__(self):
        if not self.u and self.n != _EXACT:
            return "O(pi^%d)" % self.v
        return "(%r)*pi^%d + O(pi^%d)" % (self.u, self.v, self.v + self.n)


class TruncDVF:
    """Duck-typed field of truncated local elements over a given backend."""

    def __init__(self, arith, prec):
        self.arith = arith
        self.prec = prec
        self.zero = TElt(arith.zero_r, _EXACT, _EXACT)
        self.one = self.from_int(1)
        self.name = "trunc"

    def from_int(self, c):
        return self.from_exact(Fraction(c))

    def from_exact(self, x):
        a = self.arith
        r = a.from_exact(x, self.prec + 4)
        if a.is0(r):
            # exactly-zero inputs only (nonzero integral inputs with
            # valuation beyond prec+4 are not expected at our budgets)
            return TElt(a.zero_r, _EXACT, _EXACT)
        v, u = a.val_unit(r, self.prec + 4)
        return TElt(u, v, self.prec)

    def coerce(self, x):
        if isinstance(x, TElt):
            return x
        return self.from_exact(x)

    def is_zero(self, a):
        return not a.u

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def neg(self, a):
        if not a.u:
            return a
        return TElt(self.arith.neg(a.u), a.v, a.n)

    def mul(self, a, b):
        if not a.u or not b.u:
            return TElt(self.arith.zero_r, min(a.v + b.v, _EXACT), 0)
        n = min(a.n, b.n)
        u = self.arith.mulmod(a.u, b.u, n)
        return TElt(u, a.v + b.v, n)

    def add(self, a, b):
        ar = self.arith
        if not a.u:
            a, b = b, a
        if not b.u:  # b is O(pi^{b.v})
            if not a.u:
                return TElt(ar.zero_r, min(a.v, b.v), 0)
            n = min(a.n, b.v - a.v)
            if n <= 0:
                return TElt(ar.zero_r, min(a.v, b.v), 0)
            return TElt(ar.red(a.u, n), a.v, n)
        v = min(a.v, b.v)
        k = min(a.n + a.v - v, b.n + b.v - v)
        ua = ar.shift_up(a.u, a.v - v) if a.v > v else a.u
        ub = ar.shift_up(b.u, b.v - v) if b.v > v else b.u
        s = ar.red(ar.add(ua, ub), k)
        dv, u = ar.val_unit(s, k)
        if not u:
            return TElt(ar.zero_r, v + k, 0)
        return TElt(u, v + dv, k - dv)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    # -- valuation interface -------------------------------------------------

    def val(self, a):
        if not a.u:
            raise PrecisionExhausted("valuation not determined at this precision")
        return a.v

    def vec_val(self, xs):
        """min valuation over a coordinate vector, or PrecisionExhausted."""
        exact = [x.v for x in xs if x.u]
        bounds = [x.v for x in xs if not x.u]
        if not exact:
            raise PrecisionExhausted("all coordinates vanish to working precision")
        m = min(exact)
        if any(b < m for b in bounds):
            raise PrecisionExhausted("fuzzy coordinate below the known minimum")
        return m

    def shift(self, a, s):
        """Divide by pi^s (exactly)."""
        return TElt(a.u, a.v - s if a.v < _EXACT else a.v, a.n)


def trunc_field(place, prec):
    if place.kind == "p":
        return TruncDVF(ZpArith(place.p), prec)
    if place.kind == "poly":
        if len(place.pi) == 2:  # linear place t - a: fast Taylor backend
            return TruncDVF(TaylorArith(-place.pi[0]), prec)
        return TruncDVF(PolyArith(place.pi), prec)
    raise ValueError("no truncated model for the infinite place; transform first")
