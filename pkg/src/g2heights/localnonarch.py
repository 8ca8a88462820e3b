"""Local height corrections at non-archimedean places.

Implements ε(x) = v(δ(x)) − 4v(x), the denominator-bounded fast algorithm for
μ(x) = Σ 4^(−n−1) ε(δ∘ⁿ x) with truncated local arithmetic, the period
algorithm via pseudo-addition, and the canonical local heights
λ̂(x) = −v(x) − μ(x) and λ̃ = λ̂ + v(Δ)/10.

Places of Q(t): finite places use polynomial residue arithmetic mod pi^n; the
infinite place is handled by transporting the curve through t ↦ 1/s and a
quadratic twist making the sextic integral and primitive at s = 0, with the
correction μ(x) = v(F) + μ₀(ι⁻¹x) for the twist ι: x₄ ↦ c·x₄.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, inf

from . import kummer as KU
from .curve import RawModel
from .errors import NonIntegralModel, PrecisionExhausted
from .fields import QT_FIELD, RatFunc
from .localfield import trunc_field
from .places import LocalPlace


class LocalMuResult:
    """μ at one place: exact value, ε-trace, method and bounds used."""

    __slots__ = ("mu", "eps_trace", "method", "bounds_used")

    def __init__(self, mu, eps_trace, method, bounds_used):
        self.mu = Fraction(mu)
        self.eps_trace = list(eps_trace)
        self.method = method
        self.bounds_used = bounds_used

    def __repr__(self):
        return ("LocalMuResult(mu=%s, eps_trace=%s, method=%s, bounds=%s)"
                % (self.mu, self.eps_trace, self.method, self.bounds_used))


def require_integral(model, place):
    coeffs = list(model.f) + (list(model.h) if model.h else [])
    if any(place.val(c) < 0 for c in coeffs):
        raise NonIntegralModel("model is not integral at %r" % (place,))


def _scale_coord(x, s):
    """Multiply coordinates by the exact scalar s (Fraction or RatFunc)."""
    if isinstance(s, RatFunc):
        F = QT_FIELD
        return tuple(F.mul(F.coerce(c), s) for c in x)
    return tuple(Fraction(c) * s for c in x)


def primitive_at(x, place):
    """Scale x by a power of the uniformizer so that min v(x_i) = 0."""
    v = place.vmin(x)
    if v == inf:
        raise ValueError("zero coordinate vector")
    if v == 0:
        return tuple(x)
    pi = place.uniformizer()
    if isinstance(pi, RatFunc):
        s = QT_FIELD.one
        F = QT_FIELD
        step = pi if v < 0 else F.inv(pi)
        for _ in range(abs(v)):
            s = F.mul(s, step)
        return _scale_coord(x, s)
    return _scale_coord(x, Fraction(pi)**(-v))


# ---------------------------------------------------------------------------
# ε


def eps(x, place, model):
    """ε(x) = v(δ(x)) − 4 v(x), exact and scaling-invariant."""
    require_integral(model, place)
    d = KU.duplicate(x, model)
    return int(place.vmin(d) - 4 * place.vmin(x))


def eps_pair(x, y, place, model):
    """ε(x, y) = v(B(x, y)) − 2v(x) − 2v(y)."""
    require_integral(model, place)
    B = KU.biquadratic(x, y, model)
    vb = min(place.val(B[i][j]) for i in range(4) for j in range(4))
    return int(vb - 2 * place.vmin(x) - 2 * place.vmin(y))


# ---------------------------------------------------------------------------
# Denominator bounds


def denominator_bound(vdelta, multiplicity=None, phi_exponent=None,
                      weierstrass=False, minimal=True):
    """Smallest applicable bound M on the denominator of μ.

    Generic: max{2, ⌊v(Δ)²/3⌋}.  With a known worst singular-point
    multiplicity of the special fiber, or with the exponent N of the geometric
    component group (nodal cases), sharper bounds apply; denominators divide
    2N always, and N when N is odd or a rational Weierstrass point exists.
    """
    vdelta = int(vdelta)
    best = max(2, vdelta * vdelta // 3)
    if multiplicity == 3:
        if vdelta <= 10:
            cand = min(6, vdelta + 1)
        elif vdelta <= 20:
            cand = 12
        else:
            cand = (vdelta - 12)**2 // 4
        best = min(best, max(2, cand))
    elif multiplicity is not None and multiplicity >= 4:
        if vdelta <= 10:
            cand = 3 * vdelta - 10
        elif minimal:
            cand = 4 * vdelta - 20
        else:
            cand = (vdelta - 10)**2 // 3
        best = min(best, max(2, cand))
    if phi_exponent is not None:
        N = int(phi_exponent)
        cand = N if (N % 2 == 1 or weierstrass) else 2 * N
        best = min(best, max(2, cand))
    return best


# ---------------------------------------------------------------------------
# Fast algorithm


def _fraction_in_interval(lo, width_den_sq, M):
    """The unique fraction with denominator ≤ M in [lo, lo + 1/width_den_sq]."""
    hi = lo + Fraction(1, width_den_sq)
    mid = (lo + hi) / 2
    cand = mid.limit_denominator(M)
    if lo <= cand <= hi:
        return cand
    raise PrecisionExhausted("no admissible fraction in the target interval")


def mu_fast(x, place, model, hints=None):
    """μ(x) by the six-step denominator-bounded algorithm.

    hints may carry sharper bounds: dict with any of B, M, multiplicity,
    phi_exponent, weierstrass, minimal.
    """
    if place.kind == "inf":
        return _mu_infinite_place(x, place, model, hints)
    require_integral(model, place)
    hints = hints or {}
    vD = place.val(model.discriminant())
    if vD == inf:
        raise NonIntegralModel("degenerate model (zero discriminant)")
    vD = int(vD)
    if vD <= 0:
        return LocalMuResult(0, [], "EarlyExit", (0, 1, 0))
    # B bounds ε; with H = 0 and odd residue characteristic B = v(2⁻⁴Δ),
    # which coincides with v(Δ) there; otherwise B = v(Δ).
    B = int(hints.get("B", vD))
    M = int(hints.get("M", 0)) or denominator_bound(
        vD,
        multiplicity=hints.get("multiplicity"),
        phi_exponent=hints.get("phi_exponent"),
        weierstrass=hints.get("weierstrass", False),
        minimal=hints.get("minimal", True),
    )
    m = 0
    while 3 * 4**(m + 1) <= B * M * M:
        m += 1
    prec = (m + 1) * B + 1

    T = trunc_field(place, prec)
    x0 = primitive_at(x, place)
    tx = tuple(T.from_exact(c) for c in x0)
    tmodel = RawModel(T, [T.from_exact(c) for c in model.f])
    ck = KU.CurveKummer(tmodel)

    mu0 = Fraction(0)
    trace = []
    for n in range(m + 1):
        xp = ck.duplicate(tx)
        v = T.vec_val(xp)
        if v == 0:
            return LocalMuResult(mu0, trace, "EarlyExit", (B, M, m))
        if not (0 < v <= B):
            raise PrecisionExhausted("epsilon outside [1, B]: internal error")
        trace.append(v)
        mu0 += Fraction(v, 4**(n + 1))
        tx = tuple(T.shift(c, v) for c in xp)
    mu = _fraction_in_interval(mu0, M * M, M)
    return LocalMuResult(mu, trace, "FastLoop", (B, M, m))


def _ratfunc_subst_inv(r):
    """r(t) ↦ r(1/s) as an element of Q(s)."""
    num, den = list(r.num), list(r.den)
    dn, dd = len(num) - 1, len(den) - 1
    # r(1/s) = s^(dd-dn) · rev(num) / rev(den)
    rnum, rden = num[::-1], den[::-1]
    if dd >= dn:
        rnum = [Fraction(0)] * (dd - dn) + rnum
    else:
        rden = [Fraction(0)] * (dn - dd) + rden
    return RatFunc(rnum, rden)


def _mu_infinite_place(x, place, model, hints):
    """μ at the infinite place of Q(t) via t ↦ 1/s and a quadratic twist.

    After the substitution the place becomes s = 0; scaling the sextic by
    c = s^v(F) makes it integral and primitive, and μ(x) = v(F) + μ₀(ι⁻¹x)
    where ι multiplies x₄ by c.
    """
    F = QT_FIELD
    s_place = LocalPlace.poly_place([Fraction(0), Fraction(1)])
    f_s = [_ratfunc_subst_inv(F.coerce(c)) for c in model.f]
    x_s = [_ratfunc_subst_inv(F.coerce(c)) for c in x]
    vF = int(min(s_place.val(c) for c in f_s if not F.is_zero(c)))
    s = RatFunc([Fraction(0), Fraction(1)])
    cinv = F.inv(s)
    scale = F.one
    step = cinv if vF > 0 else s
    for _ in range(abs(vF)):
        scale = F.mul(scale, step)
    f0 = [F.mul(c, scale) for c in f_s]
    x0 = (x_s[0], x_s[1], x_s[2], F.mul(x_s[3], scale))
    model0 = RawModel(F, f0)
    res = mu_fast(tuple(x0), s_place, model0, hints)
    res.mu = Fraction(res.mu) + vF
    return res


# ---------------------------------------------------------------------------
# Period algorithm


def mu_period(x, place, model, max_steps=20000):
    """μ(P) = (1/2N) Σ_{n=1}^{N−1} ε(P, nP) over a local completion.

    Iterates pseudo-addition with exact arithmetic, recording ε(P, nP) as the
    valuation shift when normalizing, until nP lies in the subgroup where
    ε = 0 (detected by ε(P, nP) = 0 and v(δ(yₙ)) = 0).
    """
    require_integral(model, place)
    x = _normalize_exact(primitive_at(x, place), place)
    e4 = _exact_e4(place)
    y_prev, y_cur = e4, x
    trace = []
    for n in range(1, max_steps + 1):
        j = _min_val_index(y_prev, place)
        w = KU.pseudo_add(x, y_cur, y_prev, model, index=j)
        e_n = int(place.vmin(w))
        if e_n == 0 and int(place.vmin(KU.duplicate(y_cur, model))) == 0:
            N = n
            mu = Fraction(sum(trace), 2 * N)
            return LocalMuResult(mu, trace, "Period", (N, 2 * N, n))
        trace.append(e_n)
        y_prev, y_cur = y_cur, _normalize_exact(w, place)
    raise PrecisionExhausted("period not found within %d steps" % max_steps)


def _exact_e4(place):
    if place.kind == "p":
        z, o = Fraction(0), Fraction(1)
    else:
        z, o = QT_FIELD.zero, QT_FIELD.one
    return (z, z, z, o)


def _min_val_index(z, place):
    best, bv = None, None
    for i in range(4):
        v = place.val(z[i])
        if v < inf and (bv is None or v < bv):
            best, bv = i, v
    return best


def _normalize_exact(x, place):
    """Primitive at the place, with coefficient size kept small over Q."""
    x = primitive_at(x, place)
    if place.kind == "p":
        return KU.normalize_primitive(x)
    # over Q(t), clear a common content to keep degrees moderate
    F = QT_FIELD
    nz = [c for c in x if not F.is_zero(c)]
    g = nz[0]
    for c in nz[1:]:
        g = _ratfunc_gcdish(g, c)
    return tuple(F.div(F.coerce(c), g) for c in x)


def _ratfunc_gcdish(a, b):
    """gcd of numerators over lcm of denominators (a content to divide out)."""
    from .fields import _pdivmod, _pgcd, _pmul

    num = _pgcd(list(a.num), list(b.num))
    g = _pgcd(list(a.den), list(b.den))
    if len(g) > 1:
        den = _pmul(list(a.den), _pdivmod(list(b.den), g)[0])
    else:
        den = _pmul(list(a.den), list(b.den))
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# Canonical local heights


def mu_value(x, place, model, hints=None):
    return mu_fast(x, place, model, hints).mu


def lambda_hat(x, place, model, hints=None):
    """λ̂(x) = −v(x) − μ(x) for the given representative."""
    vx = place.vmin(x)
    return -Fraction(vx) - mu_value(x, place, model, hints)


def lambda_tilde(x, place, model, hints=None):
    """λ̃ = λ̂ + v(Δ)/10, invariant under supported transformations."""
    vD = place.val(model.discriminant())
    return lambda_hat(x, place, model, hints) + Fraction(int(vD), 10)
