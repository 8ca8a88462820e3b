"""Enumeration of rational Jacobian points of bounded naive height.

Scans primitive projective triples (x1 : x2 : x3), solves the Kummer
quartic for rational x4, and lifts the resulting surface points to the
Jacobian.  A residue sieve modulo a few small good primes discards triples
whose x4-discriminant is a non-square mod p; correctness never depends on
the sieve.  The inner scan loop runs in a compiled kernel when available
and falls back to a vectorized numpy implementation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from mpmath import mp

from .curve import binary_disc6
from .globalheight import (canonical_height, height_difference_bound,
                           modified_naive_height, require_model)
from .jacobian import MumfordPoint, lift_to_jacobian
from .kummer import curve_kummer, normalize_primitive

try:
    from . import _scan
except ImportError:          # pragma: no cover - build-environment dependent
    _scan = None

DEFAULT_SIEVE = (3, 5, 7, 11, 13)
# larger primes sieve the x4-discriminant by Horner evaluation per stratum;
# each one independently halves the survivor count
DEFAULT_BIG_SIEVE = (65521, 65519, 65497, 65479, 65449, 65447)


class SearchConfig:
    """Scan bound N (so h_std((x1:x2:x3)) <= log N) and sieve settings."""

    __slots__ = ("bound", "sieve_primes", "big_primes", "jobs")

    def __init__(self, bound, sieve_primes=DEFAULT_SIEVE,
                 big_primes=DEFAULT_BIG_SIEVE, jobs=1):
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.bound = int(bound)
        self.sieve_primes = tuple(sieve_primes) if sieve_primes else ()
        self.big_primes = tuple(big_primes) if big_primes else ()
        self.jobs = int(jobs)


class FoundPoint:
    """A liftable Kummer point with its Jacobian lifts and h'."""

    __slots__ = ("kummer", "lifts", "hprime")

    def __init__(self, kummer, lifts, hprime):
        self.kummer = kummer
        self.lifts = lifts
        self.hprime = hprime

    def __repr__(self):
        return "FoundPoint(kummer=%r, hprime=%s)" % (self.kummer, self.hprime)


# ---------------------------------------------------------------------------
# The x4-quartic coefficients as integer forms in (x1, x2, x3)


def _x4_forms(model):
    """(K2, K1, K0) of K = K2 x4^2 + K1 x4 + K0 as integer term lists."""
    ck = curve_kummer(model)
    out = []
    for terms in ck.quartic_split():
        tl = []
        for g, c in terms:
            c = Fraction(c)
            assert c.denominator == 1
            tl.append((g, c.numerator))
        out.append(tl)
    return out


def _eval_form(terms, x1, x2, x3):
    acc = 0
    for (e1, e2, e3), c in terms:
        acc += c * x1 ** e1 * x2 ** e2 * x3 ** e3
    return acc


# ---------------------------------------------------------------------------
# Residue sieve tables


def good_sieve_primes(model, candidates=DEFAULT_SIEVE):
    """Odd primes not dividing 2 disc(F) (the sieve stays exact there)."""
    f = [int(Fraction(c)) for c in model.f]
    disc = binary_disc6(f)
    return tuple(p for p in candidates if p > 2 and disc % p != 0)


def _residue_tables(model, primes):
    """Per-prime uint8 tables over (x1, x2, x3) mod p: 1 if the
    x4-discriminant K1^2 - 4 K2 K0 is a square (or 0) mod p."""
    k2, k1, k0 = _x4_forms(model)
    tabs = []
    for p in primes:
        rng = np.arange(p, dtype=np.int64)
        a, b, c = np.meshgrid(rng, rng, rng, indexing="ij")

        def ev(terms):
            acc = np.zeros_like(a)
            for (e1, e2, e3), coef in terms:
                acc = (acc + (coef % p) * pow2(a, e1, p) * pow2(b, e2, p)
                       * pow2(c, e3, p)) % p
            return acc

        def pow2(base, e, p):
            out = np.ones_like(base)
            for _ in range(e):
                out = out * base % p
            return out

        d = (ev(k1) ** 2 - 4 * ev(k2) * ev(k0)) % p
        squares = np.zeros(p, dtype=bool)
        for t in range((p + 1) // 2 + 1):
            squares[t * t % p] = True
        tabs.append(squares[d].astype(np.uint8).ravel())
    return tabs


def _pack_tables(primes, tabs):
    offs = []
    off = 0
    for t in tabs:
        offs.append(off)
        off += len(t)
    flat = (np.concatenate(tabs) if tabs
            else np.zeros(0, dtype=np.uint8))
    return (flat, np.array(primes, dtype=np.int64),
            np.array(offs, dtype=np.int64))


# ---------------------------------------------------------------------------
# Big-prime sieve on the x4-discriminant
#
# D = K1^2 - 4 K2 K0 is a degree-8 form; for each stratum x1 we specialize
# it to a degree-8 polynomial in x3 with coefficients evaluated (mod p) on
# the whole x2 range at once.  The scan then Horner-evaluates D mod p per
# triple and keeps it only if the residue is a square, which every perfect
# square is.


def _x3_layers(forms):
    """Each form regrouped by x3-degree: list of {e3: [((e1, e2), c)]}."""
    out = []
    for terms in forms:
        layers = {}
        for (e1, e2, e3), c in terms:
            layers.setdefault(e3, []).append(((e1, e2), c))
        out.append(layers)
    return out


def _square_bitmaps(primes):
    tabs = []
    for p in primes:
        sq = np.zeros(p, dtype=np.uint8)
        t = np.arange(p // 2 + 1, dtype=np.int64)
        sq[t * t % p] = 1
        tabs.append(sq)
    return _pack_tables(primes, tabs)


def _layer_coeffs(layers, degree, x1, x2pows, p):
    """Coefficient rows (in x3) of a specialized form, mod p, over x2pows."""
    rows = []
    for e3 in range(degree + 1):
        acc = np.zeros_like(x2pows[0])
        for (e1, e2), c in layers.get(e3, ()):
            acc = (acc + (c % p) * pow(x1, e1, p) % p * x2pows[e2]) % p
        rows.append(acc)
    return rows


def _disc_coeff_rows(layers3, x1, x2lo, x2hi, primes):
    """dco[b, k, j]: coefficient of x3^k in D mod primes[b] at x2lo + j."""
    n2 = x2hi - x2lo + 1
    x2 = np.arange(x2lo, x2hi + 1, dtype=np.int64)
    dco = np.zeros((len(primes), 9, n2), dtype=np.int64)
    for b, p in enumerate(primes):
        p = int(p)
        pows = [np.ones(n2, dtype=np.int64)]
        for _ in range(4):
            pows.append(pows[-1] * (x2 % p) % p)
        k2 = _layer_coeffs(layers3[0], 2, x1, pows, p)
        k1 = _layer_coeffs(layers3[1], 3, x1, pows, p)
        k0 = _layer_coeffs(layers3[2], 4, x1, pows, p)
        for a in range(4):
            for c in range(4):
                dco[b, a + c] += k1[a] * k1[c] % p
        for a in range(3):
            for c in range(5):
                dco[b, a + c] -= 4 * (k2[a] * k0[c] % p)
        dco[b] %= p
    return dco


# ---------------------------------------------------------------------------
# Scan loops (compiled kernel / numpy fallback)


def _scan_pairs_numpy(x1, lo2, hi2, lo3, hi3, flat, ps, offs,
                      dco, bp, sq, sqoffs):
    out = []
    x2r = np.arange(lo2, hi2 + 1, dtype=np.int64)
    x3r = np.arange(lo3, hi3 + 1, dtype=np.int64)
    mask = np.gcd(np.gcd(x1, x2r)[:, None], x3r[None, :]) == 1
    for i, p in enumerate(ps):
        idx = (offs[i] + ((x1 % p) * p + x2r[:, None] % p) * p
               + x3r[None, :] % p)
        mask &= flat[idx].astype(bool)
    for b, p in enumerate(bp):
        d = np.broadcast_to(dco[b, 8][:, None], mask.shape)
        for k in range(7, -1, -1):
            d = (d * x3r[None, :] + dco[b, k][:, None]) % p
        mask &= sq[sqoffs[b] + d].astype(bool)
    for i2, i3 in np.argwhere(mask):
        out.append((int(x2r[i2]), int(x3r[i3])))
    return out


def _stratum_ranges(x1, n):
    """Canonical-sign (x2, x3) ranges for the x1 stratum."""
    if x1 > 0:
        return (-n, n, -n, n)
    return (0, n, -n, n)


def _scan_stratum(x1, n, packed, layers3, big):
    flat, ps, offs = packed
    sq, bp, sqoffs = big
    lo2, hi2, lo3, hi3 = _stratum_ranges(x1, n)
    head = []
    if x1 == 0:
        # (0, 0, x3): the only primitive canonical triple is (0, 0, 1)
        head = [(0, 1)]
        lo2 = 1
    dco = _disc_coeff_rows(layers3, x1, lo2, hi2, bp)
    if _scan is not None:
        pairs = _scan.scan_pairs(x1, lo2, hi2, lo3, hi3, flat, ps, offs,
                                 dco, bp, sq, sqoffs)
    else:
        pairs = _scan_pairs_numpy(x1, lo2, hi2, lo3, hi3, flat, ps, offs,
                                  dco, bp, sq, sqoffs)
    return head + list(pairs)


def _canonical_first_positive(x1, x2, x3):
    for c in (x1, x2, x3):
        if c:
            return c > 0
    return False


# ---------------------------------------------------------------------------
# Exact per-triple solving and lifting


def _rational_x4(model, forms, x1, x2, x3):
    """Rational solutions x4 of the Kummer quartic at an integer triple."""
    k2t, k1t, k0t = forms
    K2 = _eval_form(k2t, x1, x2, x3)
    K1 = _eval_form(k1t, x1, x2, x3)
    K0 = _eval_form(k0t, x1, x2, x3)
    if K2 == 0:
        if K1 == 0:
            # identically zero fiber would be a line on the quartic
            return [] if K0 != 0 else []
        return [Fraction(-K0, K1)]
    D = K1 * K1 - 4 * K2 * K0
    if D < 0:
        return []
    s = math.isqrt(D)
    if s * s != D:
        return []
    if s == 0:
        return [Fraction(-K1, 2 * K2)]
    return [Fraction(-K1 + s, 2 * K2), Fraction(-K1 - s, 2 * K2)]


def enumerate_bounded(model, cfg):
    """All P in J(Q) \\ {O} with h_std((x1:x2:x3)) <= log(bound).

    Complete and sound: every rational point whose first three Kummer
    coordinates have standard height at most log N appears exactly once
    (per +-P pair the lifts are grouped under one Kummer point); every
    output passes the lift round trip.  Deterministic output order.
    """
    require_model(model)
    n = cfg.bound
    primes = tuple(p for p in good_sieve_primes(model, cfg.sieve_primes))
    packed = _pack_tables(primes, _residue_tables(model, primes))
    big = _square_bitmaps(cfg.big_primes)
    forms = _x4_forms(model)
    layers3 = _x3_layers(forms)
    out = []
    seen = set()
    for x1 in range(0, n + 1):
        for x2, x3 in _scan_stratum(x1, n, packed, layers3, big):
            if not _canonical_first_positive(x1, x2, x3):
                continue
            for x4 in _rational_x4(model, forms, x1, x2, x3):
                key = normalize_primitive((x1, x2, x3, x4))
                if key in seen:
                    continue
                seen.add(key)
                if key == (0, 0, 0, 1):
                    continue
                lifts = lift_to_jacobian(key, model)
                if lifts:
                    out.append(FoundPoint(
                        key, lifts, modified_naive_height(key, model)))
    out.sort(key=lambda fp: fp.kummer)
    return out


def points_below_canonical(model, bound, digits=30, cfg=None):
    """All P in J(Q) with canonical height hhat(P) <= bound.

    Runs the height-difference bound, enumerates up to
    N = floor(exp(bound + beta-tilde)), and filters by canonical height.
    The origin is always included.  If bound + beta-tilde < 0, the search
    space is empty and -beta-tilde is a lower bound for the canonical
    height of any nontrivial rational point.
    """
    require_model(model)
    report = height_difference_bound(model, digits=digits)
    origin = FoundPoint((0, 0, 0, 1), [MumfordPoint.zero(model)], mp.mpf(0))
    with mp.workdps(digits + 10):
        cap = mp.mpf(bound) + report.total
        if cap < 0:
            return [origin], report
        n = int(mp.floor(mp.exp(cap)))
    if cfg is None:
        cfg = SearchConfig(max(n, 1))
    else:
        cfg = SearchConfig(max(n, 1), cfg.sieve_primes, cfg.big_primes,
                           cfg.jobs)
    tol = mp.mpf(10) ** (-(digits // 2))
    found = [origin]
    for fp in enumerate_bounded(model, cfg):
        h = canonical_height(fp.lifts[0], model, digits).hhat
        if h <= mp.mpf(bound) + tol:
            found.append(fp)
    return found, report
