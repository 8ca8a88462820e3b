"""Non-archimedean places of Q and Q(t) with exact normalized valuations.

A place is one of:
  * a rational prime p          (base Q),
  * a monic irreducible pi(t)   (base Q(t)), typically t - a,
  * the infinite place of Q(t)  (valuation = deg(den) - deg(num)).

Valuations are surjective onto Z; v(0) = +infinity (math.inf).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fields import RatFunc, _pdivmod, _ptrim

INF = math.inf


def _vp_int(n, p):
    if n == 0:
        return INF
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_multiplicity(c, pi):
    """Largest k with pi^k dividing the Fraction-coefficient polynomial c."""
    if not c:
        return INF
    k = 0
    while True:
        q, r = _pdivmod(list(c), pi)
        if _ptrim(r):
            return k
        c = q
        k += 1
        if not c:
            return k  # c was a power of pi times a constant; loop ends above


class LocalPlace:
    """A finite place of Q, or a place of Q(t) (finite or infinite)."""

    __slots__ = ("kind", "p", "pi", "residue_size", "residue_char")

    def __init__(self, kind, p=None, pi=None):
        self.kind = kind
        if kind == "p":
            self.p = p
            self.pi = None
            self.residue_size = p
            self.residue_char = p
        elif kind == "poly":
            pi = _ptrim([Fraction(x) for x in pi])
            if not pi or pi[-1] != 1:
                raise ValueError("place polynomial must be monic")
            if len(pi) < 2:
                raise ValueError("place polynomial must be nonconstant")
            self.p = None
            self.pi = pi
            self.residue_size = None  # infinite residue field Q[t]/(pi)
            self.residue_char = 0
        elif kind == "inf":
            self.p = None
            self.pi = None
            self.residue_size = None
            self.residue_char = 0
        else:
            raise ValueError("unknown place kind %r" % kind)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def prime(p):
        return LocalPlace("p", p=p)

    @staticmethod
    def poly_place(pi):
        return LocalPlace("poly", pi=pi)

    @staticmethod
    def infinite():
        return LocalPlace("inf")

    @staticmethod
    def parse(s, base="Q"):
        """Parse "7", "t", "t-3", "t+1/2", or "inf"."""
        s = s.strip()
        if base == "Q":
            return LocalPlace.prime(int(s))
        if s in ("inf", "infinity", "oo"):
            return LocalPlace.infinite()
        if s == "t":
            return LocalPlace.poly_place([Fraction(0), Fraction(1)])
        if s.startswith("t-"):
            return LocalPlace.poly_place([-Fraction(s[2:]), Fraction(1)])
        if s.startswith("t+"):
            return LocalPlace.poly_place([Fraction(s[2:]), Fraction(1)])
        raise ValueError("cannot parse place %r" % s)

    # -- valuation ----------------------------------------------------------

    def val(self, x):
        """Normalized valuation of a Fraction/int (kind 'p') or RatFunc."""
        if self.kind == "p":
            x = Fraction(x)
            if x == 0:
                return INF
            return _vp_int(x.numerator, self.p) - _vp_int(x.denominator, self.p)
        if isinstance(x, (int, Fraction)):
            x = RatFunc(x)
        if not x.num:
            return INF
        if self.kind == "inf":
            return (len(x.den) - 1) - (len(x.num) - 1)
        return _poly_multiplicity(x.num, self.pi) - _poly_multiplicity(x.den, self.pi)

    def vmin(self, xs):
        return min(self.val(x) for x in xs)

    def uniformizer(self):
        if self.kind == "p":
            return Fraction(self.p)
        if self.kind == "poly":
            return RatFunc(self.pi)
        return RatFunc([Fraction(1)], [Fraction(0), Fraction(1)])  # 1/t

    def __repr__(self):
        if self.kind == "p":
            return "LocalPlace(p=%d)" % self.p
        if self.kind == "inf":
            return "LocalPlace(inf)"
        return "LocalPlace(pi=%s)" % (self.pi,)

    def __eq__(self, other):
        return (isinstance(other, LocalPlace) and self.kind == other.kind
                and self.p == other.p and self.pi == other.pi)

    def __hash__(self):
        return hash((self.kind, self.p, tuple(self.pi) if self.pi else None))
