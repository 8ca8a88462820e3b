"""Genus-2 curve models y² + H(x)y = F(x), discriminants, Igusa invariants,
singularity classification of reductions, and reduction-type inference.

Invariants are computed from the binary sextic G = 4F + H² via classical
transvectants (Clebsch invariants A, B, C, D of the sextic, then the
degree-2,4,6,10 invariants I2, I4c, I6c, I10, then the J's with
J10 = 2⁻¹² disc G).  Everything is exact over the base field (Q or Q(t)).
"""

from __future__ import annotations

import json
import math
from enum import Enum
from fractions import Fraction
from math import comb, factorial

from .errors import BadReduction, NonIntegralPart
from .fields import FqField, QQ_FIELD, QT_FIELD, RatFunc
from .places import INF, LocalPlace
from .polys import int_discriminant

BASE_Q = "Q"
BASE_QT = "Q(t)"


# ---------------------------------------------------------------------------
# Binary forms and transvectants
#
# A binary form of order m is a list of m+1 field elements c[i] = coefficient
# of X^i Z^(m-i).  No trimming: zero leading coefficients are meaningful.


def _dx(F, c):
    return [F.mul(F.from_int(i + 1), c[i + 1]) for i in range(len(c) - 1)]


def _dz(F, c):
    r = len(c) - 1
    return [F.mul(F.from_int(r - i), c[i]) for i in range(r)]


def _fmul(F, a, b):
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not F.is_zero(x):
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def transvectant(F, f, g, k):
    """k-th transvectant of binary forms f (order len(f)-1) and g.

    (f,g)_k = (m-k)!(n-k)!/(m!n!) Σ_j (-1)^j C(k,j) ∂x^{k-j}∂z^j f · ∂x^j∂z^{k-j} g
    """
    m, n = len(f) - 1, len(g) - 1
    if k > m or k > n:
        raise ValueError("transvectant order too large")
    # partials(c)[j] = ∂x^{k-j} ∂z^j c
    def partials(c):
        xs = [c]
        for _ in range(k):
            xs.append(_dx(F, xs[-1]))
        res = []
        for j in range(k + 1):
            t = xs[k - j]
            for _ in range(j):
                t = _dz(F, t)
            res.append(t)
        return res

    pf = partials(f)
    pg = partials(g)
    acc = [F.zero] * (m + n - 2 * k + 1)
    for j in range(k + 1):
        term = _fmul(F, pf[j], pg[k - j])
        c = F.from_int((-1) ** j * comb(k, j))
        for i, t in enumerate(term):
            acc[i] = F.add(acc[i], F.mul(c, t))
    pref = F.div(F.from_int(factorial(m - k) * factorial(n - k)),
                 F.from_int(factorial(m) * factorial(n)))
    return [F.mul(pref, t) for t in acc]


def igusa_j_of_sextic(F, g):
    """J2, J4, J6, J8, J10 of the binary sextic g (7 field elements)."""
    f = list(g)
    assert len(f) == 7
    i4 = transvectant(F, f, f, 4)           # order 4
    A = transvectant(F, f, f, 6)[0]
    B = transvectant(F, i4, i4, 4)[0]
    Delta = transvectant(F, i4, i4, 2)      # order 4
    C = transvectant(F, i4, Delta, 4)[0]
    y1 = transvectant(F, f, i4, 4)          # order 2
    y2 = transvectant(F, i4, y1, 2)         # order 2
    y3 = transvectant(F, i4, y2, 2)         # order 2
    D = transvectant(F, y3, y1, 2)[0]

    def lin(*pairs):
        acc = F.zero
        for c, t in pairs:
            acc = F.add(acc, F.mul(F.from_int(c), t))
        return acc

    mul, div = F.mul, F.div
    A2 = mul(A, A)
    A3 = mul(A2, A)
    I2 = lin((-120, A))
    I4c = lin((-720, A2), (6750, B))
    I6c = lin((8640, A3), (-108000, mul(A, B)), (202500, C))
    I10 = lin((-62208, mul(A3, A2)), (972000, mul(A3, B)),
              (1620000, mul(A2, C)), (-3037500, mul(A, mul(B, B))),
              (-6075000, mul(B, C)), (-4556250, D))
    J2 = div(I2, F.from_int(8))
    J4 = div(F.sub(F.mul(F.from_int(4), mul(J2, J2)), I4c), F.from_int(96))
    J6 = div(F.sub(F.sub(F.mul(F.from_int(8), mul(J2, mul(J2, J2))),
                         F.mul(F.from_int(160), mul(J2, J4))), I6c),
             F.from_int(576))
    J8 = div(F.sub(mul(J2, J6), mul(J4, J4)), F.from_int(4))
    J10 = div(I10, F.from_int(4096))
    return J2, J4, J6, J8, J10


def binary_disc6(g):
    """Discriminant of an integer sextic as a binary form of order 6.

    Zero leading coefficients are handled by disc_n(f) = lc² · disc_{n-1}(f)
    when exactly one root moves to infinity, and 0 when two or more do.
    """
    g = [int(x) for x in g]
    assert len(g) == 7
    order = 6
    factor = 1
    while order >= 2 and g[order] == 0:
        if g[order - 1] == 0:
            return 0
        factor *= g[order - 1] ** 2
        g = g[:order]
        order -= 1
    if order < 2:
        return factor
    return factor * int_discriminant(g)


# ---------------------------------------------------------------------------
# Curve model


def _parse_rat(s):
    return Fraction(s)


def _coeff_from_json(c, base):
    if base == BASE_Q:
        return Fraction(c)
    if isinstance(c, (list, tuple)):
        return RatFunc([Fraction(x) for x in c])
    return RatFunc(Fraction(c))


def _coeff_to_json(c, base):
    if base == BASE_Q:
        return str(c)
    return [str(x) for x in c.num] if c.den == [Fraction(1)] else {
        "num": [str(x) for x in c.num], "den": [str(x) for x in c.den]}


class CurveModel:
    """The curve y² + H(x)y = F(x) with exact coefficients f0..f6, h0..h3."""

    def __init__(self, f, h=None, base=BASE_Q, check=True):
        self.base = base
        self.field = QQ_FIELD if base == BASE_Q else QT_FIELD
        F = self.field
        f = list(f) + [0] * (7 - len(f))
        self.f = [F.coerce(c) for c in f[:7]]
        if h is None:
            self.h = None
        else:
            h = list(h) + [0] * (4 - len(h))
            self.h = [F.coerce(c) for c in h[:4]]
            if all(F.is_zero(c) for c in self.h):
                self.h = None
        self._disc = None
        self._igusa = None
        if check and self.field.is_zero(self.discriminant()):
            raise ValueError("model is singular (discriminant 0)")

    # -- basic data ---------------------------------------------------------

    def sextic(self):
        """Coefficients of G = 4F + H² (order-6 binary form)."""
        F = self.field
        g = [F.mul(F.from_int(4), c) for c in self.f]
        if self.h is not None:
            for i in range(4):
                for j in range(4):
                    g[i + j] = F.add(g[i + j], F.mul(self.h[i], self.h[j]))
        return g

    def discriminant(self):
        """Δ = 2⁻¹² · disc(4F + H²)."""
        if self._disc is None:
            g = self.sextic()
            if self.base == BASE_Q and all(c.denominator == 1 for c in g):
                self._disc = Fraction(binary_disc6([c.numerator for c in g]),
                                      4096)
            else:
                self._disc = self.igusa().J10
        return self._disc

    def igusa(self):
        if self._igusa is None:
            J2, J4, J6, J8, J10 = igusa_j_of_sextic(self.field, self.sextic())
            self._igusa = IgusaData(self.field, J2, J4, J6, J8, J10)
        return self._igusa

    def is_integral_at(self, place):
        cs = list(self.f) + (list(self.h) if self.h else [])
        return all(place.val(c) >= 0 for c in cs)

    def is_integral(self):
        if self.base == BASE_Q:
            return all(c.denominator == 1 for c in self.f) and (
                self.h is None or all(c.denominator == 1 for c in self.h))
        def poly_ok(c):
            return c.den == [Fraction(1)]
        return all(poly_ok(c) for c in self.f) and (
            self.h is None or all(poly_ok(c) for c in self.h))

    # -- serialization ------------------------------------------------------

    @staticmethod
    def from_json(obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        base = obj.get("base", BASE_Q)
        f = [_coeff_from_json(c, base) for c in obj["f"]]
        h = [_coeff_from_json(c, base) for c in obj["h"]] if obj.get("h") else None
        return CurveModel(f, h, base=base)

    def to_json(self):
        out = {"f": [_coeff_to_json(c, self.base) for c in self.f],
               "base": self.base}
        if self.h is not None:
            out["h"] = [_coeff_to_json(c, self.base) for c in self.h]
        return out

    def __repr__(self):
        return "CurveModel(f=%r, h=%r, base=%r)" % (self.f, self.h, self.base)


class RawModel:
    """A curve model over an arbitrary duck-typed field (no global checks).

    Same .field / .f / .h / .sextic() interface as CurveModel; used for
    finite-field oracles, interpolation, and local computations.
    """

    __slots__ = ("field", "f", "h")

    def __init__(self, field, f, h=None):
        F = field
        self.field = F
        f = list(f) + [0] * (7 - len(f))
        self.f = [F.coerce(c) for c in f[:7]]
        if h is None:
            self.h = None
        else:
            h = list(h) + [0] * (4 - len(h))
            self.h = [F.coerce(c) for c in h[:4]]
            if all(F.is_zero(c) for c in self.h):
                self.h = None

    def sextic(self):
        return CurveModel.sextic(self)

    def discriminant(self):
        """Δ = J10 of 4F + H², computed generically over the model's field."""
        return igusa_j_of_sextic(self.field, self.sextic())[4]

    def __repr__(self):
        return "RawModel(%s, f=%r, h=%r)" % (self.field.name, self.f, self.h)


def clear_denominators(model):
    """Return (model', d) with model' integral, via f ↦ d²f, h ↦ d·h.

    The substitution Y ↦ Y/d, scaling the defining equation by d², keeps the
    curve isomorphic over Q; disc scales by d^20, so v(Δ') = v(Δ) + 20 v(d).
    """
    assert model.base == BASE_Q
    dens = [c.denominator for c in model.f]
    if model.h is not None:
        dens += [c.denominator for c in model.h]
    d = 1
    for x in dens:
        d = d * x // math.gcd(d, x)
    if d == 1:
        return model, 1
    f = [c * d * d for c in model.f]
    h = [c * d for c in model.h] if model.h is not None else None
    return CurveModel(f, h, base=model.base), d


# ---------------------------------------------------------------------------
# Igusa data, classification, reduction types


class IgusaData:
    """The five Igusa invariants plus the derived I4 and I12."""

    __slots__ = ("field", "J2", "J4", "J6", "J8", "J10", "I4", "I12")

    def __init__(self, field, J2, J4, J6, J8, J10):
        F = field
        self.field = F
        self.J2, self.J4, self.J6, self.J8, self.J10 = J2, J4, J6, J8, J10
        # I4 = J2² - 24 J4
        self.I4 = F.sub(F.mul(J2, J2), F.mul(F.from_int(24), J4))
        # I12 = -8 J4³ + 9 J2 J4 J6 - 27 J6² - J2² J8
        J4c = F.mul(J4, F.mul(J4, J4))
        self.I12 = F.sub(
            F.sub(F.add(F.mul(F.from_int(-8), J4c),
                        F.mul(F.from_int(9), F.mul(J2, F.mul(J4, J6)))),
                  F.mul(F.from_int(27), F.mul(J6, J6))),
            F.mul(F.mul(J2, J2), J8))

    def __repr__(self):
        return ("IgusaData(J2=%r, J4=%r, J6=%r, J8=%r, J10=%r)"
                % (self.J2, self.J4, self.J6, self.J8, self.J10))


class SingularityClass(Enum):
    Smooth = "Smooth"
    OneNode = "OneNode"
    TwoNodes = "TwoNodes"
    ThreeNodes = "ThreeNodes"
    Cusp = "Cusp"
    DeepDegenerate = "DeepDegenerate"


class ReductionType:
    """Special-fiber type of the minimal regular model, with parameters.

    tag ∈ {"I_m00", "I_m1m2", "I_m1m2m3", "I0_I0_l", "Im1_I0_l",
           "Im1_Im2_l", "Unknown"}; parts are the (m, l) parameters.
    """

    __slots__ = ("tag", "parts")

    def __init__(self, tag, parts=()):
        self.tag = tag
        self.parts = tuple(int(x) for x in parts)

    def __eq__(self, other):
        return (isinstance(other, ReductionType)
                and self.tag == other.tag and self.parts == other.parts)

    def __hash__(self):
        return hash((self.tag, self.parts))

    def __repr__(self):
        return "ReductionType(%r, %r)" % (self.tag, self.parts)

    def node_multiplicities(self):
        """The m_i for purely nodal types (possibly empty), else None."""
        if self.tag == "I_m00":
            return [m for m in self.parts if m > 0]
        if self.tag == "I_m1m2":
            return list(self.parts)
        if self.tag == "I_m1m2m3":
            return list(self.parts)
        return None


def classify_special_fiber(inv, place=None):
    """Singularity class of the reduced curve from invariant (non)vanishing.

    With a place, "zero" means positive valuation of the (integral) invariant;
    without, literal vanishing is used.
    """
    F = inv.field
    if place is None:
        def z(x):
            return F.is_zero(x)
    else:
        def z(x):
            return place.val(x) > 0
    if not z(inv.J10):
        return SingularityClass.Smooth
    if not z(inv.I12):
        return SingularityClass.OneNode
    if not z(inv.I4):
        if not z(inv.J4) or not z(inv.J6):
            return SingularityClass.TwoNodes
        return SingularityClass.ThreeNodes
    if not (z(inv.J2) and z(inv.J4) and z(inv.J6) and z(inv.J8)):
        return SingularityClass.Cusp
    return SingularityClass.DeepDegenerate


def _as_nonneg_int(x):
    if x == INF or x != int(x) or x < 0:
        raise NonIntegralPart("reduction-type part %r is not a nonnegative integer" % (x,))
    return int(x)


def infer_reduction_type(inv, place):
    """Reduction type from invariant valuations, assuming semistability.

    Applies the valuation formulas for the nodal cases (selected by the
    singularity class of the reduction) and the three two-component chain
    cases (tried in order of decreasing specificity).  Returns Unknown when
    no case's divisibility constraints hold.
    """
    v = place.val
    cls = classify_special_fiber(inv, place)
    vJ10, vI12, vJ4, vI4 = v(inv.J10), v(inv.I12), v(inv.J4), v(inv.I4)

    if cls is SingularityClass.Smooth:
        return ReductionType("I_m00", (0,))
    if cls is SingularityClass.OneNode:
        return ReductionType("I_m00", (_as_nonneg_int(vJ10),))
    if cls is SingularityClass.TwoNodes:
        m1 = min(vI12, Fraction(vJ10, 2))
        m2 = vJ10 - m1
        return ReductionType("I_m1m2", (_as_nonneg_int(m1), _as_nonneg_int(m2)))
    if cls is SingularityClass.ThreeNodes:
        m1 = min(vJ4, Fraction(vJ10, 3),
                 Fraction(vI12, 2) if vI12 != INF else INF)
        m2 = min(vI12 - m1 if vI12 != INF else INF, Fraction(vJ10 - m1, 2))
        m3 = vJ10 - m1 - m2
        return ReductionType("I_m1m2m3", (_as_nonneg_int(m1),
                                          _as_nonneg_int(m2),
                                          _as_nonneg_int(m3)))
    if cls is SingularityClass.Cusp:
        return ReductionType("Unknown")  # not semistable; handled elsewhere

    # DeepDegenerate: two elliptic pieces joined by a chain of length l
    if vI4 not in (INF,) and vI4 > 0 and vI4 % 4 == 0:
        l = vI4 // 4
        threeI4 = 3 * vI4
        m1 = min(vI12 - threeI4 if vI12 != INF else INF,
                 Fraction(vJ10 - threeI4, 2))
        m2 = vJ10 - threeI4 - m1
        try:
            m1i, m2i = _as_nonneg_int(m1), _as_nonneg_int(m2)
            if 0 < m1i <= m2i and l > 0:
                return ReductionType("Im1_Im2_l", (m1i, m2i, l))
        except NonIntegralPart:
            pass
    if vI12 != INF and vI12 % 12 == 0 and vJ10 > vI12:
        l = vI12 // 12
        m1 = vJ10 - vI12
        try:
            return ReductionType("Im1_I0_l", (_as_nonneg_int(m1), l))
        except NonIntegralPart:
            pass
    if vJ10 % 12 == 0:
        return ReductionType("I0_I0_l", (vJ10 // 12,))
    return ReductionType("Unknown")


# ---------------------------------------------------------------------------
# Point counting over small finite fields


def _factor_prime_power(q):
    if q < 2:
        raise ValueError("not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise ValueError("not a prime power")
            return p, k
    raise ValueError("not a prime power")


def count_points_curve(model, q):
    """#C(F_q) for odd q at which the model has good reduction."""
    p, k = _factor_prime_power(q)
    if p == 2:
        raise ValueError("even q not supported")
    assert model.base == BASE_Q and model.is_integral()
    J10 = model.igusa().J10
    if Fraction(J10).numerator % p == 0:
        raise BadReduction("J10 ≡ 0 mod %d" % p)
    g = [int(c) for c in model.sextic()]
    K = FqField(p, k)
    coeffs = [K.from_int(c) for c in g]
    # affine points of y² + Hy = F, counted via (2y+H)² = G: 1 + chi(G(x))
    n = 0
    for x in K.elements():
        acc = K.zero
        for c in reversed(coeffs):
            acc = K.add(K.mul(acc, x), c)
        n += 1 + K.chi(acc)
    # infinity: 2, 1, or 0 points by the leading coefficient of G
    lc = coeffs[6]
    c6 = K.chi(lc)
    n += 2 if c6 > 0 else (1 if c6 == 0 else 0)
    return n


def jacobian_order(model, q):
    """#J(F_q) from #C(F_q) and #C(F_{q²}) via the zeta-function relations."""
    p, k = _factor_prime_power(q)
    n1 = count_points_curve(model, q)
    # counting over F_{q²} reuses the same prime with doubled degree
    p2, k2 = p, 2 * k
    assert model.base == BASE_Q
    g = [int(c) for c in model.sextic()]
    K = FqField(p2, k2)
    coeffs = [K.from_int(c) for c in g]
    n2 = 0
    for x in K.elements():
        acc = K.zero
        for c in reversed(coeffs):
            acc = K.add(K.mul(acc, x), c)
        n2 += 1 + K.chi(acc)
    c6 = K.chi(coeffs[6])
    n2 += 2 if c6 > 0 else (1 if c6 == 0 else 0)

    s1 = q + 1 - n1
    s2 = (s1 * s1 - q * q - 1 + n2) // 2
    order = 1 - s1 + s2 - q * s1 + q * q
    assert order > 0
    return order
