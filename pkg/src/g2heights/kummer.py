"""Kummer surface arithmetic: quartic K, duplication δ, biquadratic forms B,
pseudo-addition, twist and diagonal/swap transformation actions.

The generic coefficient tables (integer polynomials in f0..f6, H = 0 models)
live in data/kummer_tables.json, produced by scripts/derive_tables.py via
exact interpolation against Cantor arithmetic; their defining identities are
re-checked by the test suite and the CLI selftest.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from math import gcd

from .errors import AmbiguousDivision, UnsupportedTransformation

_TABLES = None


def _tables():
    global _TABLES
    if _TABLES is None:
        path = os.path.join(os.path.dirname(__file__), "data",
                            "kummer_tables.json")
        with open(path) as fh:
            raw = json.load(fh)
        _TABLES = {
            "K": [(tuple(g), tuple(m), c) for g, m, c in raw["K"]],
            "delta": [[(tuple(g), tuple(m), c) for g, m, c in d]
                      for d in raw["delta"]],
            "B": {k: [(tuple(a), tuple(b), tuple(m), c) for a, b, m, c in v]
                  for k, v in raw["B"].items()},
        }
    return _TABLES


def raw_tables():
    """The generic tables (for the debug CLI dump)."""
    return _tables()


def _fmon(F, f, m):
    v = F.one
    for c, e in zip(f, m):
        for _ in range(e):
            v = F.mul(v, c)
    return v


class CurveKummer:
    """Per-curve specialization of the generic tables (H = 0)."""

    def __init__(self, model):
        if model.h is not None:
            raise ValueError("Kummer tables require H = 0")
        F = model.field
        self.field = F
        t = _tables()
        f = model.f
        self.K = self._spec_quartic(F, f, t["K"])
        self.delta = [self._spec_quartic(F, f, d) for d in t["delta"]]
        self.B = {}
        for i in range(4):
            for j in range(i, 4):
                terms = {}
                for (a, b, m, c) in t["B"]["%d%d" % (i + 1, j + 1)]:
                    val = F.mul(F.from_int(c), _fmon(F, f, m))
                    key = (a, b)
                    terms[key] = F.add(terms.get(key, F.zero), val)
                self.B[(i, j)] = [(a, b, v) for (a, b), v in terms.items()
                                 if not F.is_zero(v)]

    @staticmethod
    def _spec_quartic(F, f, terms):
        acc = {}
        for (g, m, c) in terms:
            val = F.mul(F.from_int(c), _fmon(F, f, m))
            acc[g] = F.add(acc.get(g, F.zero), val)
        return [(g, v) for g, v in acc.items() if not F.is_zero(v)]

    # -- evaluation ---------------------------------------------------------

    def _xmon(self, x, g, cache=None):
        F = self.field
        if cache is None:
            v = F.one
            for c, e in zip(x, g):
                for _ in range(e):
                    v = F.mul(v, c)
            return v
        v = cache.get(g)
        if v is None:
            for i in range(4):
                if g[i]:
                    prev = g[:i] + (g[i] - 1,) + g[i + 1:]
                    v = F.mul(self._xmon(x, prev, cache), x[i])
                    break
            cache[g] = v
        return v

    def eval_quartic(self, terms, x, cache=None):
        F = self.field
        acc = F.zero
        for g, c in terms:
            acc = F.add(acc, F.mul(c, self._xmon(x, g, cache)))
        return acc

    def kummer_value(self, x):
        return self.eval_quartic(self.K, x, {(0, 0, 0, 0): self.field.one})

    def duplicate(self, x):
        cache = {(0, 0, 0, 0): self.field.one}
        return tuple(self.eval_quartic(d, x, cache) for d in self.delta)

    def biquadratic_entry(self, i, j, x, y, cx=None, cy=None):
        F = self.field
        if i > j:
            i, j = j, i
        acc = F.zero
        for a, b, c in self.B[(i, j)]:
            t = F.mul(self._xmon(x, a, cx), self._xmon(y, b, cy))
            if a != b:
                t = F.add(t, F.mul(self._xmon(x, b, cx), self._xmon(y, a, cy)))
            acc = F.add(acc, F.mul(c, t))
        return acc

    def biquadratic(self, x, y):
        one = self.field.one
        cx, cy = {(0, 0, 0, 0): one}, {(0, 0, 0, 0): one}
        return [[self.biquadratic_entry(i, j, x, y, cx, cy) for j in range(4)]
                for i in range(4)]

    def quartic_split(self):
        """K = K2·x4² + K1·x4 + K0 as x4-free term lists in (x1,x2,x3)."""
        parts = {0: [], 1: [], 2: []}
        for g, c in self.K:
            parts[g[3]].append((g[:3], c))
        return parts[2], parts[1], parts[0]


def curve_kummer(model):
    ck = getattr(model, "_kummer_cache", None)
    if ck is None:
        ck = CurveKummer(model)
        try:
            model._kummer_cache = ck
        except AttributeError:
            pass
    return ck


# ---------------------------------------------------------------------------
# Public operations


def kummer_quartic(model):
    return curve_kummer(model)


def on_kummer(x, model):
    ck = curve_kummer(model)
    return ck.field.is_zero(ck.kummer_value(x))


def duplicate(x, model):
    return curve_kummer(model).duplicate(x)


def biquadratic(x, y, model):
    return curve_kummer(model).biquadratic(x, y)


def pseudo_add(x, y, z, model, index=None):
    """w with w ∗ z = B(x, y), i.e. Kummer coordinates of P+Q given z ∼ P−Q.

    The returned representative is z_j²·w for the resolving index j (chosen
    as the largest |z_j| over Q, else the first nonzero; or forced by
    `index`).  Division-free: w_j' = B_jj z_j, w_i' = B_ij z_j − B_jj z_i.
    """
    ck = curve_kummer(model)
    F = ck.field
    if index is None:
        nz = [j for j in range(4) if not F.is_zero(z[j])]
        if not nz:
            raise AmbiguousDivision("z = 0")
        if isinstance(z[nz[0]], (int, Fraction)):
            index = max(nz, key=lambda j: abs(z[j]))
        else:
            index = nz[0]
    j = index
    if F.is_zero(z[j]):
        raise AmbiguousDivision("resolving coordinate of z vanishes")
    Bjj = ck.biquadratic_entry(j, j, x, y)
    w = []
    for i in range(4):
        if i == j:
            w.append(F.mul(Bjj, z[j]))
        else:
            Bij = ck.biquadratic_entry(i, j, x, y)
            w.append(F.sub(F.mul(Bij, z[j]), F.mul(Bjj, z[i])))
    return tuple(w)


def twist_map(x, c, field=None):
    """(x1, x2, x3, x4) ↦ (x1, x2, x3, c·x4): 𝒦 of Y²=F₀ → 𝒦 of Y²=cF₀."""
    if field is None:
        return (x[0], x[1], x[2], x[3] * c)
    return (x[0], x[1], x[2], field.mul(x[3], field.coerce(c)))


def transform_model(model, u, w, e, swap=False):
    """Model of the image curve under X↦uX, Z↦wZ, Y↦eY (then optional swap).

    New coefficients f'_i = f_i u^i w^(6-i) / e²; the swap reverses them.
    """
    from .curve import RawModel

    F = model.field
    if model.h is not None:
        raise UnsupportedTransformation("transformations require H = 0")
    u, w, e = F.coerce(u), F.coerce(w), F.coerce(e)
    e2 = F.mul(e, e)
    f2 = []
    for i in range(7):
        val = model.f[i]
        for _ in range(i):
            val = F.mul(val, u)
        for _ in range(6 - i):
            val = F.mul(val, w)
        f2.append(F.div(val, e2))
    if swap:
        f2 = f2[::-1]
    return RawModel(F, f2)


def transform_diag_swap(x, model, u, w, e, swap=False):
    """Induced Kummer action of the transformation of transform_model.

    Returns the canonically normalized representative: the linear map is
    diag(u/w, 1, w/u, u³w³/e²), composed with −(x1,x2,x3,x4)↦(x3,x2,x1,x4)
    when swapping.  With this normalization the local canonical height
    satisfies λ̂'(τ(x)) = λ̂(x) − v(τ) with v(τ) = transformation_valuation,
    and λ̂ + v(Δ)/10 is model-independent.
    """
    F = model.field
    if model.h is not None:
        raise UnsupportedTransformation("transformations require H = 0")
    u, w, e = F.coerce(u), F.coerce(w), F.coerce(e)
    lam = F.div(u, w)
    ilam = F.div(w, u)
    uw = F.mul(u, w)
    uw3 = F.mul(F.mul(uw, uw), uw)
    d4 = F.div(uw3, F.mul(e, e))
    y = (F.mul(lam, x[0]), x[1], F.mul(ilam, x[2]), F.mul(d4, x[3]))
    if swap:
        y = (F.neg(y[2]), F.neg(y[1]), F.neg(y[0]), F.neg(y[3]))
    return y


def transformation_valuation(place, u, w, e):
    """v(τ) = v(det τ') = 3v(u·w) − 2v(e) for the normalized Kummer action."""
    return 3 * (place.val(u) + place.val(w)) - 2 * place.val(e)


# ---------------------------------------------------------------------------
# Primitive integer representatives over Q


def normalize_primitive(x):
    """Scale rational Kummer coordinates to integers with gcd 1."""
    xs = [Fraction(c) for c in x]
    if all(c == 0 for c in xs):
        raise ValueError("zero coordinates")
    den = 1
    for c in xs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in xs]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    ints = [c // g for c in ints]
    for c in ints:
        if c != 0:
            if c < 0:
                ints = [-t for t in ints]
            break
    return tuple(ints)
