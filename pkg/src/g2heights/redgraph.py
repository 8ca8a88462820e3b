"""Reduction graphs and per-place bounds for the height correction term.

For a semistable model the correction function μ factors through the component
group of the Néron model and equals the effective resistance between the two
components in the reduction graph (unit resistance per edge).  This module
provides the graph/resistance machinery, the closed forms for the nodal
reduction types, and — for the two-component degenerations — an analysis of
the two elliptic pieces (Hensel splitting of the sextic plus Tate's algorithm)
giving the bound  β ≤ β(K₁) + β(K₂) + 2l  on β = sup μ.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .curve import infer_reduction_type, ReductionType
from .errors import PrecisionExhausted, UnsupportedReduction
from .fields import FpField, QQ_FIELD, RatFunc
from .localfield import trunc_field
from .places import INF


# ---------------------------------------------------------------------------
# Metric graphs and effective resistance


class ReductionGraph:
    """Multigraph with unit-resistance edges; vertices 0..n-1."""

    def __init__(self, n):
        self.n = n
        self.edges = []

    def add_edge(self, i, j):
        if i != j:  # self-loops carry no current
            self.edges.append((i, j))

    def laplacian(self):
        L = [[Fraction(0)] * self.n for _ in range(self.n)]
        for i, j in self.edges:
            L[i][i] += 1
            L[j][j] += 1
            L[i][j] -= 1
            L[j][i] -= 1
        return L

    def resistance(self, i, j):
        """Effective resistance between vertices i and j."""
        if i == j:
            return Fraction(0)
        n = self.n
        L = self.laplacian()
        # ground vertex j: solve the reduced system L' g = e_i
        idx = [k for k in range(n) if k != j]
        A = [[L[r][c] for c in idx] + [Fraction(1 if r == i else 0)]
             for r in idx]
        m = len(idx)
        for col in range(m):
            piv = next(r for r in range(col, m) if A[r][col] != 0)
            A[col], A[piv] = A[piv], A[col]
            inv = Fraction(1) / A[col][col]
            A[col] = [x * inv for x in A[col]]
            for r in range(m):
                if r != col and A[r][col] != 0:
                    f = A[r][col]
                    A[r] = [x - f * y for x, y in zip(A[r], A[col])]
        return A[idx.index(i)][m]


def nodal_graph(ms):
    """Reduction graph of a nodal type with node multiplicities ms.

    Vertex 0 is the component A carrying the smooth points; for three nodes
    vertex 1 is the second component E.  Returns (graph, chains) where
    chains[k][i] is the vertex of the i-th curve in the k-th chain
    (chains[k][0] = A and chains[k][m_k] = A resp. E).
    """
    ms = [int(m) for m in ms]
    three = len(ms) == 3
    n = 2 if three else 1
    chains = []
    g = None
    verts = []
    for m in ms:
        row = [0]
        for _ in range(m - 1):
            row.append(n)
            n += 1
        row.append(1 if three else 0)
        chains.append(row)
    g = ReductionGraph(n)
    for row in chains:
        for a, b in zip(row, row[1:]):
            g.add_edge(a, b)
    return g, chains


# ---------------------------------------------------------------------------
# Closed forms for μ on the component group (nodal types)


def mu_one_node(i, m):
    """μ of a point mapping to [B_i − A], unique node, m = v(Δ)."""
    i %= m
    return Fraction(i * (m - i), m)


def mu_two_nodes(i, j, m1, m2):
    """μ of a point mapping to [B_i − C_j], two nodes."""
    return mu_one_node(i, m1) + mu_one_node(j, m2)


def mu_three_nodes(i, j, m1, m2, m3):
    """μ of a point mapping to [B_i − C_j], three nodes (two components)."""
    M = m1 * m2 + m1 * m3 + m2 * m3
    num = (m2 * i * (m1 - i) + m3 * (i + j) * (m1 - i + m2 - j)
           + m1 * j * (m2 - j))
    return Fraction(num, M)


def beta_nodal(ms):
    """sup μ over the full geometric component group for a nodal type."""
    ms = [int(m) for m in ms if m > 0]
    if not ms:
        return Fraction(0)
    if len(ms) == 1:
        m = ms[0]
        return Fraction((m * m) // 2, 2 * m)
    if len(ms) == 2:
        return beta_nodal(ms[:1]) + beta_nodal(ms[1:])
    m1, m2, m3 = ms
    best = Fraction(0)
    for a, b, c in ((m1, m2, m3), (m2, m3, m1), (m3, m1, m2)):
        for i in range(a + 1):
            for j in range(b + 1):
                v = mu_three_nodes(i, j, a, b, c)
                if v > best:
                    best = v
    return best


def gamma_nodal(ms):
    """sup ε over the geometric component group for a nodal type."""
    ms = [int(m) for m in ms if m > 0]
    if not ms:
        return 0
    if len(ms) <= 2:
        return sum(2 * (m // 2) for m in ms)
    best = 0
    for a in range(3):
        for b in range(a + 1, 3):
            d = 0 if ms[a] % 2 == 0 and ms[b] % 2 == 0 else 1
            best = max(best, ms[a] + ms[b] - d)
    return best


def component_group_nodal(ms):
    """Structure (d, n) with Φ ≅ Z/d × Z/n for a nodal type."""
    ms = [int(m) for m in ms if m > 0]
    if not ms:
        return (1, 1)
    if len(ms) == 1:
        return (1, ms[0])
    if len(ms) == 2:
        return (gcd(ms[0], ms[1]), ms[0] * ms[1] // gcd(ms[0], ms[1]))
    m1, m2, m3 = ms
    d = gcd(gcd(m1, m2), m3)
    return (d, (m1 * m2 + m1 * m3 + m2 * m3) // d)


def denominator_nodal(ms):
    """Integer M with μ ∈ (1/M)·Z for a nodal type."""
    ms = [int(m) for m in ms if m > 0]
    if not ms:
        return 1
    if len(ms) == 1:
        return ms[0]
    if len(ms) == 2:
        return ms[0] * ms[1] // gcd(ms[0], ms[1])
    m1, m2, m3 = ms
    return m1 * m2 + m1 * m3 + m2 * m3


# ---------------------------------------------------------------------------
# Elliptic Kodaira types: sup μ table and Tate's algorithm


def kodaira_beta(symbol, m=0):
    """sup of the elliptic correction function over the geometric fibers."""
    if symbol == "I":
        return Fraction((m * m) // 2, 2 * m) if m else Fraction(0)
    if symbol == "I*":
        return 1 + Fraction(m, 4)
    return {"II": Fraction(0), "III": Fraction(1, 2), "IV": Fraction(2, 3),
            "IV*": Fraction(4, 3), "III*": Fraction(3, 2),
            "II*": Fraction(0)}[symbol]


def kodaira_name(symbol, m=0):
    if symbol == "I":
        return "I%d" % m
    if symbol == "I*":
        return "I%d*" % m
    return symbol


# residue-field polynomial helpers (duck field K, coefficient lists low→high)


def _rp_trim(K, c):
    c = list(c)
    while c and K.is_zero(c[-1]):
        c.pop()
    return c


def _rp_monic(K, c):
    inv = K.inv(c[-1])
    return [K.mul(inv, x) for x in c]


def _rp_divmod(K, a, b):
    a = list(a)
    q = [K.zero] * max(0, len(a) - len(b) + 1)
    inv = K.inv(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        f = K.mul(a[i + len(b) - 1], inv)
        q[i] = f
        if not K.is_zero(f):
            for j, bc in enumerate(b):
                a[i + j] = K.sub(a[i + j], K.mul(f, bc))
    return q, _rp_trim(K, a)


def _rp_gcd(K, a, b):
    a, b = _rp_trim(K, a), _rp_trim(K, b)
    while b:
        a, b = b, _rp_divmod(K, a, b)[1]
    return _rp_monic(K, a) if a else []


def _rp_deriv(K, c):
    return _rp_trim(K, [K.mul(K.from_int(i), x)
                        for i, x in enumerate(c)][1:])


def _rp_eval(K, c, x):
    acc = K.zero
    for co in reversed(c):
        acc = K.add(K.mul(acc, x), co)
    return acc


def _multiplicity(K, c, r):
    m = 0
    while True:
        q, rem = _rp_divmod(K, c, [K.neg(r), K.one])
        if rem:
            return m
        m += 1
        c = q
        if len(c) <= 1:
            return m + (0 if c else 0)


def _multiple_roots(K, c):
    """Roots of multiplicity ≥ 2 of c over K, as [(root, multiplicity)].

    Only covers the configurations arising from degenerate reductions
    (multiple-root loci of degree ≤ 2); raises UnsupportedReduction else.
    """
    c = _rp_trim(K, c)
    d = _rp_deriv(K, c)
    if not d:
        # char p divides all exponents: c(x) = b(x^p); over F_p the p-th
        # power map is the identity, so every root r of b gives the root r
        # of c with multiplicity p·(multiplicity in b)
        if not isinstance(K, FpField):
            raise UnsupportedReduction(
                "vanishing derivative in characteristic 0")
        p = K.p
        base = _rp_trim(K, [c[i] for i in range(0, len(c), p)])
        if len(base) == 2:
            r = K.neg(K.div(base[0], base[1]))
            return [(r, p)]
        if len(base) == 3:
            a, b, cc = base[2], base[1], base[0]
            disc = K.sub(K.mul(b, b),
                         K.mul(K.from_int(4), K.mul(a, cc)))
            if K.is_zero(disc):
                r = K.neg(K.div(b, K.mul(K.from_int(2), a)))
                return [(r, 2 * p)]
            s = K.sqrt(disc)
            if s is None:
                raise UnsupportedReduction(
                    "conjugate singular points over a quadratic extension")
            two_a = K.mul(K.from_int(2), a)
            return [(K.div(K.sub(s, b), two_a), p),
                    (K.div(K.sub(K.neg(s), b), two_a), p)]
        raise UnsupportedReduction("inseparable reduction pattern")
    g = _rp_gcd(K, c, d)
    if len(g) <= 1:
        return []
    if len(g) == 2:
        r = K.neg(K.div(g[0], g[1]))
        return [(r, _multiplicity(K, c, r))]
    if len(g) == 3:
        # either a double root of g (one root of high multiplicity of c)
        # or two simple roots of g (two multiple roots of c)
        a, b, cc = g[2], g[1], g[0]
        disc = K.sub(K.mul(b, b), K.mul(K.from_int(4), K.mul(a, cc)))
        if K.is_zero(disc):
            r = K.neg(K.div(b, K.mul(K.from_int(2), a)))
            return [(r, _multiplicity(K, c, r))]
        s = K.sqrt(disc)
        if s is None:
            raise UnsupportedReduction(
                "conjugate singular points over a quadratic extension")
        two_a = K.mul(K.from_int(2), a)
        r1 = K.div(K.sub(s, b), two_a)
        r2 = K.div(K.sub(K.neg(s), b), two_a)
        return [(r1, _multiplicity(K, c, r1)),
                (r2, _multiplicity(K, c, r2))]
    raise UnsupportedReduction("multiple-root locus of degree > 2")


class LocalRing:
    """Truncated arithmetic in the completion plus residue-field access."""

    def __init__(self, place, prec):
        if place.kind == "p":
            self.res = FpField(place.p)
        elif place.kind == "poly" and len(place.pi) == 2:
            self.res = QQ_FIELD
        else:
            raise UnsupportedReduction(
                "special-fiber analysis needs a prime or a linear place")
        self.place = place
        self.T = trunc_field(place, prec)
        self.prec = prec

    def coerce(self, x):
        return self.T.from_exact(x)

    def vge(self, a, k):
        """Is v(a) ≥ k?  Raises PrecisionExhausted if undecidable."""
        if a.v >= k:
            return True
        if a.u:
            return False
        raise PrecisionExhausted("valuation test beyond working precision")

    def val(self, a):
        return self.T.val(a)

    def residue(self, a):
        """Image in the residue field (a must have v ≥ 0)."""
        if self.vge(a, 1):
            return self.res.zero
        if self.place.kind == "p":
            return a.u % self.place.p
        return Fraction(a.u[0])

    def lift(self, r):
        """A lift of a residue-field element to the truncated ring."""
        if self.place.kind == "p":
            return self.T.from_exact(Fraction(int(r)))
        return self.T.from_exact(RatFunc(Fraction(r)))

    def shift(self, a, s):
        return self.T.shift(a, s)


def _ell_disc(T, a2, a4, a6):
    """Discriminant of y² = x³ + a2x² + a4x + a6 up to a power of 2:
    -4a2³a6 + a2²a4² + 18a2a4a6 - 4a4³ - 27a6²."""
    def n(c):
        return T.from_int(c)
    a2c, a4c, a6c = a2, a4, a6
    t1 = T.mul(n(-4), T.mul(a2c, T.mul(a2c, T.mul(a2c, a6c))))
    t2 = T.mul(T.mul(a2c, a2c), T.mul(a4c, a4c))
    t3 = T.mul(n(18), T.mul(a2c, T.mul(a4c, a6c)))
    t4 = T.mul(n(-4), T.mul(a4c, T.mul(a4c, a4c)))
    t5 = T.mul(n(-27), T.mul(a6c, a6c))
    return T.add(T.add(T.add(t1, t2), T.add(t3, t4)), t5)


def _ell_translate(T, a2, a4, a6, r):
    """Coefficients after x ↦ x + r."""
    n = T.from_int
    r2 = T.mul(r, r)
    b2 = T.add(a2, T.mul(n(3), r))
    b4 = T.add(a4, T.add(T.mul(n(2), T.mul(a2, r)), T.mul(n(3), r2)))
    b6 = T.add(a6, T.add(T.mul(a4, r),
                         T.add(T.mul(a2, r2), T.mul(r2, r))))
    return b2, b4, b6


def tate_kodaira(R, a2, a4, a6, max_rounds=40):
    """Kodaira type of y² = x³ + a2x² + a4x + a6 over the completion.

    Returns (symbol, m, vdelta_min, rescalings); the model may be
    non-minimal, in which case `rescalings` counts the u = π scalings applied.
    Only valid for odd residue characteristic (the quadratic term stays
    completed-square-free).
    """
    T, K = R.T, R.res
    scal = 0
    for _ in range(max_rounds):
        delta = _ell_disc(T, a2, a4, a6)
        vD = R.val(delta)
        if vD == 0:
            return ("I", 0, 0, scal)
        # translate the singular point of the reduction to the origin
        cbar = [R.residue(a6), R.residue(a4), R.residue(a2), K.one]
        roots = _multiple_roots(K, cbar)
        if not roots:
            raise UnsupportedReduction("singular reduction without "
                                       "multiple root")
        r0, _ = roots[0]
        if not K.is_zero(r0):
            a2, a4, a6 = _ell_translate(T, a2, a4, a6, R.lift(r0))
        if not R.vge(a2, 1):
            return ("I", vD, vD, scal)
        if not R.vge(a6, 2):
            return ("II", 0, vD, scal)
        b8 = T.sub(T.mul(T.from_int(4), T.mul(a2, a6)), T.mul(a4, a4))
        if not R.vge(b8, 3):
            return ("III", 0, vD, scal)
        if not R.vge(a6, 3):
            return ("IV", 0, vD, scal)
        # P(t) = t³ + (a2/π)t² + (a4/π²)t + (a6/π³)
        p2, p1, p0 = R.shift(a2, 1), R.shift(a4, 2), R.shift(a6, 3)
        pbar = [R.residue(p0), R.residue(p1), R.residue(p2), K.one]
        proots = _multiple_roots(K, pbar)
        if not proots:
            return ("I*", 0, vD, scal)
        r1, mult = proots[0]
        if mult == 2:
            return ("I*", vD - 6, vD, scal)
        # triple root: recenter and distinguish IV*, III*, II*, non-minimal
        if not K.is_zero(r1):
            a2, a4, a6 = _ell_translate(
                T, a2, a4, a6,
                T.mul(self_pi(R), R.lift(r1)))
        if not R.vge(a6, 5):
            return ("IV*", 0, vD, scal)
        if not R.vge(a4, 4):
            return ("III*", 0, vD, scal)
        if not R.vge(a6, 6):
            return ("II*", 0, vD, scal)
        a2, a4, a6 = R.shift(a2, 2), R.shift(a4, 4), R.shift(a6, 6)
        scal += 1
    raise UnsupportedReduction("minimization did not terminate")


def self_pi(R):
    """The uniformizer as an element of the truncated ring."""
    return R.T.shift(R.T.one, -1)


# ---------------------------------------------------------------------------
# Two-component degenerations: split the sextic into two elliptic pieces


def _translate_sextic(T, f, r):
    """Coefficients of f(x + r) for a degree-≤6 coefficient list over T."""
    out = list(f)
    # Horner-style recentering: repeatedly divide by (x - (-r)) ≡ shift
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = T.add(out[j], T.mul(r, out[j + 1]))
    return out


def _hensel_cubic_split(R, f):
    """f = g·h with g a monic cubic lifting  f̄/f̄₃  and h ≡ f̄₃ (unit).

    f is a list of 7 truncated-ring elements with v(f₄), v(f₅), v(f₆) > 0 and
    f₃ a unit.  Returns (g, h) as coefficient lists ([g₀,g₁,g₂] monic and
    [h₀,…,h₃]), exact modulo π^prec.
    """
    T, K = R.T, R.res
    u = R.residue(f[3])
    if K.is_zero(u):
        raise UnsupportedReduction("middle coefficient not a unit")
    uinv = K.inv(u)
    gbar = [K.mul(uinv, R.residue(f[i])) for i in range(3)]  # + monic x³
    g = [R.lift(c) for c in gbar]
    h = [R.lift(u), T.zero, T.zero, T.zero]
    gb = gbar + [K.one]
    for k in range(1, R.prec):
        # e = f - g·h, valuation ≥ k by induction
        prod = [T.zero] * 7
        gfull = g + [T.one]
        for i, gi in enumerate(gfull):
            for j, hj in enumerate(h):
                prod[i + j] = T.add(prod[i + j], T.mul(gi, hj))
        e = [T.sub(fi, pi) for fi, pi in zip(f, prod)]
        if all((not c.u) or c.v >= R.prec - 1 for c in e):
            break
        ebar = []
        for c in e:
            if not R.vge(c, k):
                raise PrecisionExhausted("factor lifting lost track")
            s = R.shift(c, k)
            ebar.append(R.residue(s) if s.u else K.zero)
        ebar = _rp_trim(K, ebar)
        if not ebar:
            continue
        # solve  h̄·δg + ḡ·δh = ē  with h̄ = u constant
        dg = _rp_divmod(K, [K.mul(uinv, c) for c in ebar], gb)[1]
        dg += [K.zero] * (3 - len(dg))
        rem = list(ebar) + [K.zero] * (7 - len(ebar))
        for i, c in enumerate(dg):
            rem[i] = K.sub(rem[i], K.mul(u, c))
        dh = _rp_divmod(K, _rp_trim(K, rem), gb)[0]
        dh += [K.zero] * (4 - len(dh))
        pik = T.shift(T.one, -k)
        g = [T.add(gi, T.mul(pik, R.lift(c))) for gi, c in zip(g, dg)]
        h = [T.add(hi, T.mul(pik, R.lift(c))) for hi, c in zip(h, dh[:4])]
    return g, h


def _arrange_cusps(R, f):
    """Move the multiplicity-3 points of the reduction to 0 and ∞.

    f: 7 truncated-ring coefficients of a primitive sextic.  Returns the
    rearranged coefficient list with v(f₄), v(f₅), v(f₆) > 0 and f₃ a unit.
    """
    T, K = R.T, R.res
    for _ in range(3):
        if any(c.v < 0 for c in f):
            raise UnsupportedReduction("non-integral coefficients")
        fbar = _rp_trim(K, [R.residue(c) for c in f])
        deg = len(fbar) - 1
        if deg == 3:
            # multiplicity-3 point at ∞, unit leading residue: done
            return f
        if deg < 3:
            raise UnsupportedReduction("point of multiplicity > 3 at ∞")
        finite = [(r, m) for r, m in _multiple_roots(K, fbar) if m >= 3]
        if not finite:
            raise UnsupportedReduction("no multiplicity-3 point to move")
        r, m = finite[0]
        if m > 3:
            raise UnsupportedReduction("point of multiplicity > 3")
        if not K.is_zero(r):
            f = _translate_sextic(T, f, R.lift(r))
        f = f[::-1]  # swap 0 ↔ ∞
    raise UnsupportedReduction("could not normalize the singular points")


def elliptic_pieces(model, place):
    """Kodaira types (K₁, K₂) and chain length l of a two-piece degeneration.

    Requires an integral H = 0 model, odd residue characteristic, and a
    reduction with one or two multiplicity-3 points.  Returns
    (K1, K2, l, content) with Kᵢ = (symbol, m) and `content` the valuation
    pulled out of the coefficients (quadratic-twist contribution).
    """
    if model.h is not None:
        raise UnsupportedReduction("analysis requires H = 0")
    if place.kind == "p" and place.p == 2:
        raise UnsupportedReduction("even residue characteristic")
    vf = min(place.val(c) for c in model.f if not model.field.is_zero(c))
    if vf == INF:
        raise UnsupportedReduction("zero sextic")
    content = int(vf)
    if content % 2:
        # a ramified quadratic twist would change the Kodaira types
        raise UnsupportedReduction("odd coefficient content")
    vD = place.val(model.discriminant())
    prec = int(vD) + 16
    R = LocalRing(place, prec)
    pi_pow = R.T.shift(R.T.one, -content)
    f = [R.T.mul(R.coerce(c), pi_pow) if content else R.coerce(c)
         for c in model.f]
    f = _arrange_cusps(R, f)
    g, h = _hensel_cubic_split(R, f)
    sy1, m1, vd1, s1 = tate_kodaira(R, g[2], g[1], g[0])
    a2 = h[1]
    a4 = R.T.mul(h[0], h[2])
    a6 = R.T.mul(R.T.mul(h[0], h[0]), h[3])
    sy2, m2, vd2, s2 = tate_kodaira(R, a2, a4, a6)
    l = s1 + s2
    if vd1 + vd2 + 12 * l != int(vD) - 10 * content:
        raise UnsupportedReduction("discriminant bookkeeping mismatch")
    return (sy1, m1), (sy2, m2), l, content


# ---------------------------------------------------------------------------
# Per-place bounds


class PlaceBounds:
    """β/γ bounds and metadata for one finite place."""

    __slots__ = ("vdelta", "rtype", "beta", "gamma", "denominator", "method")

    def __init__(self, vdelta, rtype, beta, gamma, denominator, method):
        self.vdelta = int(vdelta)
        self.rtype = rtype
        self.beta = Fraction(beta)
        self.gamma = int(gamma)
        self.denominator = denominator
        self.method = method

    def __repr__(self):
        return ("PlaceBounds(vdelta=%d, rtype=%r, beta=%s, gamma=%d, "
                "method=%r)" % (self.vdelta, self.rtype, self.beta,
                                self.gamma, self.method))


def _chain_beta(m1, m2, l):
    return (kodaira_beta("I", m1) + kodaira_beta("I", m2)
            + 2 * Fraction(l))


def place_bounds(model, place):
    """Upper bounds β ≥ sup μ and γ ≥ sup ε at a finite place.

    Uses the closed nodal formulas when the reduction type can be inferred
    from the invariants, the two-elliptic-piece bound for chain types, and
    falls back to the always-valid β ≤ v(Δ)/4, γ ≤ v(Δ).
    """
    vD = place.val(model.discriminant())
    if vD == INF:
        raise ValueError("degenerate model")
    vD = int(vD)
    if vD <= 0:
        return PlaceBounds(vD, ReductionType("I_m00", (0,)),
                           0, 0, 1, "good")
    gamma_cap = vD
    inv = model.igusa()
    rtype = infer_reduction_type(inv, place)
    ms = rtype.node_multiplicities()
    if ms is not None:
        return PlaceBounds(vD, rtype, beta_nodal(ms),
                           min(gamma_nodal(ms), gamma_cap),
                           denominator_nodal(ms), "nodal")
    if rtype.tag == "Im1_Im2_l":
        m1, m2, l = rtype.parts
        return PlaceBounds(vD, rtype, _chain_beta(m1, m2, l), gamma_cap,
                           None, "chain")
    if rtype.tag == "Im1_I0_l":
        m1, l = rtype.parts
        return PlaceBounds(vD, rtype, _chain_beta(m1, 0, l), gamma_cap,
                           None, "chain")
    if rtype.tag == "I0_I0_l":
        (l,) = rtype.parts
        return PlaceBounds(vD, rtype, _chain_beta(0, 0, l), gamma_cap,
                           None, "chain")
    # cuspidal / unknown: try the elliptic-piece analysis
    try:
        K1, K2, l, content = elliptic_pieces(model, place)
        beta = (Fraction(max(content, 0)) + kodaira_beta(*K1)
                + kodaira_beta(*K2) + 2 * Fraction(l))
        tag = "%s-%s-%d" % (kodaira_name(*K1), kodaira_name(*K2), l)
        return PlaceBounds(vD, ReductionType("Unknown"), beta, gamma_cap,
                           None, "pieces:" + tag)
    except (UnsupportedReduction, PrecisionExhausted, ZeroDivisionError,
            ValueError):
        return PlaceBounds(vD, ReductionType("Unknown"),
                           Fraction(vD, 4), gamma_cap, None, "fallback")
