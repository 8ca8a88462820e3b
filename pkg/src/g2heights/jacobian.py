"""Divisor-class arithmetic on genus-2 Jacobians in Mumford representation.

A point is a pair (a, b) with a monic of degree ≤ 2, b of degree < deg a
(or b = 0), satisfying b² + H·b − F ≡ 0 (mod a), plus infinity multiplicities.

Supported models:
  * quintic (f6 = 0, h3 = 0): one point at infinity, full Cantor arithmetic
    on divisors with deg a ∈ {0, 1, 2};
  * sextic: two points at infinity, arithmetic closed on affine degree-2
    divisors plus the identity.  When a reduction step would produce a
    divisor supported at infinity (possible only when the leading coefficient
    of 4F + H² is a square), UnsupportedDivisor is raised.
"""

from __future__ import annotations

from .errors import UnsupportedDivisor
from . import polys as P


def _is_quintic(model):
    F = model.field
    return F.is_zero(model.f[6]) and (model.h is None or F.is_zero(model.h[3]))


def _hpoly(model):
    F = model.field
    return P.trim(F, list(model.h)) if model.h is not None else []


def _fpoly(model):
    return P.trim(model.field, list(model.f))


class MumfordPoint:
    """Degree-2 divisor class (a(x), b(x)) with infinity bookkeeping."""

    __slots__ = ("a", "b", "inf_weights")

    def __init__(self, a, b, inf_weights=None):
        self.a = list(a)
        self.b = list(b)
        if inf_weights is None:
            inf_weights = (2 - (len(self.a) - 1), 0)
        self.inf_weights = tuple(inf_weights)

    @staticmethod
    def zero(model):
        F = model.field
        if _is_quintic(model):
            return MumfordPoint([F.one], [], (2, 0))
        return MumfordPoint([F.one], [], (1, 1))

    def is_identity(self):
        return len(self.a) == 1

    def deg_a(self):
        return len(self.a) - 1

    def eq(self, other, field):
        return (len(self.a) == len(other.a)
                and all(field.eq(x, y) for x, y in zip(self.a, other.a))
                and len(self.b) == len(other.b)
                and all(field.eq(x, y) for x, y in zip(self.b, other.b))
                and self.inf_weights == other.inf_weights)

    def __repr__(self):
        return "MumfordPoint(a=%r, b=%r, inf=%r)" % (self.a, self.b,
                                                     self.inf_weights)


def on_jacobian(pt, model):
    """Check b² + H·b − F ≡ 0 (mod a)."""
    F = model.field
    h = _hpoly(model)
    f = _fpoly(model)
    expr = P.sub(F, P.add(F, P.mul(F, pt.b, pt.b), P.mul(F, h, pt.b)), f)
    return not P.mod(F, expr, pt.a)


def make_point(model, a, b):
    """Build and validate a Mumford point with monic a, b reduced mod a."""
    F = model.field
    a = P.monic(F, P.trim(F, [F.coerce(c) for c in a]))
    b = P.mod(F, P.trim(F, [F.coerce(c) for c in b]), a) if len(a) > 1 else []
    if len(a) - 1 > 2:
        raise ValueError("deg a > 2")
    pt = MumfordPoint(a, b, _default_inf(model, len(a) - 1))
    if not on_jacobian(pt, model):
        raise ValueError("b² + Hb − F not divisible by a")
    return pt


def _default_inf(model, dega):
    if _is_quintic(model):
        return (2 - dega, 0)
    if dega == 2:
        return (0, 0)
    if dega == 0:
        return (1, 1)
    raise UnsupportedDivisor("degree-%d divisor on a two-infinity model" % dega)


def cantor_neg(pt, model):
    if pt.is_identity():
        return pt
    F = model.field
    h = _hpoly(model)
    nb = P.mod(F, P.sub(F, P.neg(F, h), pt.b), pt.a)
    return MumfordPoint(pt.a, nb, pt.inf_weights)


def cantor_add(p1, p2, model):
    """Reduced Mumford representative of the sum of two divisor classes."""
    F = model.field
    if p1.is_identity():
        return p2
    if p2.is_identity():
        return p1
    f = _fpoly(model)
    h = _hpoly(model)
    a1, b1 = p1.a, p1.b
    a2, b2 = p2.a, p2.b

    d1, e1, e2 = P.xgcd(F, a1, a2)
    bsum = P.add(F, P.add(F, b1, b2), h)
    d, c1, c2 = P.xgcd(F, d1, bsum)
    # d = (c1 e1) a1 + (c1 e2) a2 + c2 (b1 + b2 + h)
    s1 = P.mul(F, c1, e1)
    s2 = P.mul(F, c1, e2)
    a3, rem = P.divmod_(F, P.mul(F, a1, a2), P.mul(F, d, d))
    assert not rem
    num = P.add(F, P.add(F, P.mul(F, P.mul(F, s1, a1), b2),
                         P.mul(F, P.mul(F, s2, a2), b1)),
                P.mul(F, c2, P.add(F, P.mul(F, b1, b2), f)))
    b3, rem = P.divmod_(F, num, d)
    assert not rem
    b3 = P.mod(F, b3, a3)

    # reduction: a ← (F − bH − b²)/a, b ← (−H − b) mod a
    while len(a3) - 1 > 2:
        num = P.sub(F, f, P.add(F, P.mul(F, b3, h), P.mul(F, b3, b3)))
        anew, rem = P.divmod_(F, num, a3)
        assert not rem
        anew = P.trim(F, anew)
        if not anew:
            raise UnsupportedDivisor("degenerate reduction")
        b3 = P.mod(F, P.sub(F, P.neg(F, h), b3), anew)
        a3 = anew

    a3 = P.monic(F, P.trim(F, a3))
    dega = len(a3) - 1
    if dega == 2 or _is_quintic(model):
        b3 = P.mod(F, b3, a3) if dega > 0 else []
        return MumfordPoint(a3, b3, _default_inf(model, dega))
    if dega == 0:
        return MumfordPoint.zero(model)
    raise UnsupportedDivisor(
        "sum leaves the affine-degree-2 chart (leading coefficient square?)")


def cantor_mul(pt, n, model):
    """n·P by double-and-add; negative n allowed."""
    if n < 0:
        return cantor_mul(cantor_neg(pt, model), -n, model)
    acc = MumfordPoint.zero(model)
    while n:
        if n & 1:
            acc = cantor_add(acc, pt, model)
        pt = cantor_add(pt, pt, model)
        n >>= 1
    return acc


# ---------------------------------------------------------------------------
# Kummer coordinates


def mumford_to_kummer(pt, model):
    """Projective 4-tuple (x1:x2:x3:x4) attached to the divisor class.

    For an affine class {(x1,y1), (x2,y2)} the first three coordinates are
    (1, x1+x2, x1x2); the fourth interpolates (F0(x1,x2) − 2y1y2)/(x1−x2)²
    where F0 is the symmetric biquadratic form of F.  Requires H = 0.
    """
    F = model.field
    if model.h is not None:
        raise ValueError("Kummer map requires H = 0 (complete the square first)")
    f = model.f
    two = F.from_int(2)
    if pt.is_identity():
        return (F.zero, F.zero, F.zero, F.one)
    if pt.deg_a() == 2:
        s = F.neg(pt.a[1])       # x1 + x2
        p = pt.a[0]              # x1 x2
        b = pt.b + [F.zero] * (2 - len(pt.b))
        b1, b0 = b[1], b[0]
        # y1 y2 = b1² p + b1 b0 s + b0²
        y1y2 = F.add(F.add(F.mul(F.mul(b1, b1), p),
                           F.mul(F.mul(b1, b0), s)),
                     F.mul(b0, b0))
        p2 = F.mul(p, p)
        F0 = F.add(F.add(F.add(F.mul(two, f[0]), F.mul(f[1], s)),
                         F.add(F.mul(F.mul(two, f[2]), p),
                               F.mul(f[3], F.mul(s, p)))),
                   F.add(F.mul(F.mul(two, f[4]), p2),
                         F.add(F.mul(f[5], F.mul(s, p2)),
                               F.mul(F.mul(two, f[6]), F.mul(p, p2)))))
        dsq = F.sub(F.mul(s, s), F.mul(F.from_int(4), p))  # (x1 − x2)²
        if not F.is_zero(dsq):
            x4 = F.div(F.sub(F0, F.mul(two, y1y2)), dsq)
            return (F.one, s, p, x4)
        # doubled point 2(x, y) − W with y = b(x) ≠ 0:
        # x4 = f3 x + 2 f4 x² + 4 f5 x³ + 6 f6 x⁴ − F″(x)/2 + F′(x)²/(4F(x))
        x = F.div(s, two)
        y = P.evaluate(F, b, x)
        if F.is_zero(y):
            raise ValueError("invalid Mumford data at a Weierstrass point")
        fl = _fpoly(model)
        Fp = P.evaluate(F, P.derivative(F, fl), x)
        Fpp = P.evaluate(F, P.derivative(F, P.derivative(F, fl)), x)
        xs = [F.one]
        for _ in range(4):
            xs.append(F.mul(xs[-1], x))
        lead = F.add(F.add(F.mul(f[3], xs[1]), F.mul(F.from_int(2), F.mul(f[4], xs[2]))),
                     F.add(F.mul(F.from_int(4), F.mul(f[5], xs[3])),
                           F.mul(F.from_int(6), F.mul(f[6], xs[4]))))
        x4 = F.add(F.sub(lead, F.div(Fpp, two)),
                   F.div(F.mul(Fp, Fp), F.mul(F.from_int(4), P.evaluate(F, fl, x))))
        return (F.one, s, p, x4)
    if pt.deg_a() == 1:
        # (x1, y1) + ∞ − W; for f6 = 0 the fourth coordinate is f5 x1²
        x1 = F.neg(pt.a[0])
        if not F.is_zero(model.f[6]):
            r = F.sqrt(model.f[6]) if hasattr(F, "sqrt") else None
            if r is None:
                raise UnsupportedDivisor("degree-1 divisor needs √f6")
            y1 = P.evaluate(F, pt.b, x1)
            sigma = F.one if pt.inf_weights[0] >= pt.inf_weights[1] else F.neg(F.one)
            x4 = F.add(F.mul(f[5], F.mul(x1, x1)),
                       F.sub(F.mul(F.mul(two, f[6]), F.mul(x1, F.mul(x1, x1))),
                             F.mul(F.mul(two, y1), F.mul(sigma, r))))
        else:
            x4 = F.mul(f[5], F.mul(x1, x1))
        return (F.zero, F.one, x1, x4)
    raise UnsupportedDivisor("no Kummer coordinates for this divisor")


def lift_to_jacobian(x, model):
    """Rational points P with κ(P) = x, as a list (∅, or {P, −P}, or {O}).

    Reconstructs a from (x1, x2, x3) and solves for b = b1 X + b0 in the
    quotient algebra: with F mod a = c1 X + c0 the square condition forces
    u = b1² to satisfy u²(s²−4p) − u(2 c1 s + 4 c0) + c1² = 0.  Candidates
    are verified by a mumford_to_kummer round trip.
    """
    F = model.field
    if model.h is not None:
        raise ValueError("lifting requires H = 0")
    x1, x2, x3, x4 = (F.coerce(c) for c in x)
    out = []
    if F.is_zero(x1):
        return _lift_degenerate(x, model)
    s = F.div(x2, x1)
    p = F.div(x3, x1)
    a = [p, F.neg(s), F.one]
    fr = P.mod(F, _fpoly(model), a)
    fr = fr + [F.zero] * (2 - len(fr))
    c1, c0 = fr[1], fr[0]
    four = F.from_int(4)
    # u-quadratic: A u² + B u + C with A = s² − 4p
    A = F.sub(F.mul(s, s), F.mul(four, p))
    Bq = F.neg(F.add(F.mul(F.from_int(2), F.mul(c1, s)), F.mul(four, c0)))
    Cq = F.mul(c1, c1)
    for u in _field_quadratic_roots(F, A, Bq, Cq):
        if F.is_zero(u):
            if not F.is_zero(c1):
                continue
            b0 = F.sqrt(c0)
            if b0 is None:
                continue
            cands = [[b0], [F.neg(b0)]]
        else:
            b1 = F.sqrt(u)
            if b1 is None:
                continue
            b0 = F.div(F.sub(c1, F.mul(u, s)), F.mul(F.from_int(2), b1))
            cands = [[b0, b1], [F.neg(b0), F.neg(b1)]]
        for b in cands:
            try:
                pt = make_point(model, a, b)
            except ValueError:
                continue
            k = mumford_to_kummer(pt, model)
            if _proj_eq(F, k, (x1, x2, x3, x4)) and not any(
                    pt.eq(q, F) for q in out):
                out.append(pt)
    return out


def _lift_degenerate(x, model):
    F = model.field
    x1, x2, x3, x4 = (F.coerce(c) for c in x)
    if F.is_zero(x2):
        # (0, 0, x3, x4): only the origin (0,0,0,1) is liftable here
        if F.is_zero(x3) and not F.is_zero(x4):
            return [MumfordPoint.zero(model)]
        return []
    # (0, 1, x1pt, x4): degree-1 divisor (quintic models)
    if not _is_quintic(model):
        return []
    xpt = F.div(x3, x2)
    want = F.mul(model.f[5], F.mul(xpt, xpt))
    if not F.eq(F.div(x4, x2), want):
        return []
    val = P.evaluate(F, _fpoly(model), xpt)
    y = F.sqrt(val)
    if y is None:
        return []
    out = [make_point(model, [F.neg(xpt), F.one], [y])]
    neg = cantor_neg(out[0], model)
    if not out[0].eq(neg, F):
        out.append(neg)
    return out


def _field_quadratic_roots(F, A, B, C):
    """Roots of A u² + B u + C in the field (exact; [] if none)."""
    if F.is_zero(A):
        if F.is_zero(B):
            return []
        return [F.div(F.neg(C), B)]
    disc = F.sub(F.mul(B, B), F.mul(F.from_int(4), F.mul(A, C)))
    r = F.sqrt(disc)
    if r is None:
        return []
    twoA = F.mul(F.from_int(2), A)
    roots = [F.div(F.sub(r, B), twoA)]
    if not F.is_zero(r):
        roots.append(F.div(F.sub(F.neg(r), B), twoA))
    return roots


def _proj_eq(F, u, v):
    for i in range(4):
        for j in range(4):
            if not F.eq(F.mul(u[i], v[j]), F.mul(u[j], v[i])):
                return False
    return True


# ---------------------------------------------------------------------------
# Random sampling over finite fields (test / interpolation support)


def random_split_point(model, rng, doubled=False):
    """A random Mumford point supported on two rational affine points.

    With doubled=True returns 2(x,y) − W data (repeated x, tangent b).
    Requires a field with rand() and sqrt() (finite prime fields) and H = 0.
    """
    F = model.field
    f = _fpoly(model)
    for _ in range(4000):
        if doubled:
            x = F.rand(rng)
            fx = P.evaluate(F, f, x)
            if F.is_zero(fx):
                continue
            y = F.sqrt(fx)
            if y is None:
                continue
            fpx = P.evaluate(F, P.derivative(F, f), x)
            b1 = F.div(fpx, F.mul(F.from_int(2), y))
            b0 = F.sub(y, F.mul(b1, x))
            a = P.mul(F, [F.neg(x), F.one], [F.neg(x), F.one])
            return make_point(model, a, [b0, b1])
        xa, xb = F.rand(rng), F.rand(rng)
        if F.eq(xa, xb):
            continue
        fa, fb = P.evaluate(F, f, xa), P.evaluate(F, f, xb)
        ya, yb = F.sqrt(fa), F.sqrt(fb)
        if ya is None or yb is None:
            continue
        if rng.randrange(2):
            ya = F.neg(ya)
        if rng.randrange(2):
            yb = F.neg(yb)
        b1 = F.div(F.sub(yb, ya), F.sub(xb, xa))
        b0 = F.sub(ya, F.mul(b1, xa))
        a = P.mul(F, [F.neg(xa), F.one], [F.neg(xb), F.one])
        return make_point(model, a, [b0, b1])
    raise RuntimeError("could not sample a random point")
