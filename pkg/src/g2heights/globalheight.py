"""Global heights over Q: naive and canonical heights, the exact
factorization-free finite part, height pairings, regulators, index bounds,
and the naive-vs-canonical height difference bound.

Everything exact stays exact: the finite part of the height correction is a
rational linear combination of logarithms of pairwise coprime integers, and
per-place bounds are rationals; floating evaluation happens only at the end,
at a caller-chosen precision.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from mpmath import mp

from .curve import CurveModel, RawModel, binary_disc6
from .errors import FactorizationTimeout
from .fields import QQ_FIELD
from .jacobian import cantor_add, mumford_to_kummer
from .kummer import CurveKummer, normalize_primitive
from .localarch import mu_arch, partition_coefficients, phi_iterate_bound
from .localnonarch import _fraction_in_interval
from .places import LocalPlace
from .redgraph import place_bounds

# ---------------------------------------------------------------------------
# Integer utilities


class ModRing:
    """Z/N as a duck ring (enough of the field protocol for table work)."""

    def __init__(self, n):
        self.n = n
        self.name = "Z/(%d-bit modulus)" % n.bit_length()
        self.zero = 0
        self.one = 1 % n

    def coerce(self, a):
        if isinstance(a, Fraction):
            if a.denominator == 1:
                return a.numerator % self.n
            return a.numerator * pow(a.denominator, -1, self.n) % self.n
        return int(a) % self.n

    def from_int(self, a):
        return a % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_zero(self, a):
        return a % self.n == 0


def _gcd_all(xs):
    g = 0
    for x in xs:
        g = math.gcd(g, abs(int(x)))
    return g


def _part_supported_on(n, g):
    """gcd(n, g^inf): the largest divisor of n supported on primes of g."""
    d = 1
    c = math.gcd(n, g)
    while c > 1:
        n //= c
        d *= c
        c = math.gcd(n, c)
    return d


def _int_delta(model):
    """|Delta| of an integral H = 0 model as an integer (= 2^8 |disc F|)."""
    delta = Fraction(model.discriminant())
    assert delta.denominator == 1
    return abs(delta.numerator)


def _content(ints):
    return _gcd_all(ints)


# ---------------------------------------------------------------------------
# Primality and (budgeted) factorization

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24; strong test beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n, rng, deadline):
    if n % 2 == 0:
        return 2
    while True:
        if deadline is not None and time.monotonic() > deadline:
            return None
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                if deadline is not None and time.monotonic() > deadline:
                    return None
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def partial_factor(n, budget=30.0, trial_bound=100000, seed=2):
    """Factor n into primes as far as the time budget allows.

    Returns (factors, leftover): `factors` maps primes to exponents and
    `leftover` is an unfactored composite cofactor (1 on full success).
    """
    n = abs(int(n))
    factors = {}
    if n <= 1:
        return factors, 1
    for p in range(2, trial_bound):
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n == 1:
        return factors, 1
    rng = random.Random(seed)
    deadline = None if budget is None else time.monotonic() + budget
    stack, leftover = [n], 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = round(m ** 0.5) if m < 1 << 52 else _iroot2(m)
        if root * root == m:
            stack.extend([root, root])
            continue
        d = _brent_rho(m, rng, deadline)
        if d is None:
            leftover *= m
            continue
        stack.extend([d, m // d])
    return factors, leftover


def _iroot2(n):
    x = 1 << ((n.bit_length() + 1) // 2)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            return x
        x = y


# ---------------------------------------------------------------------------
# Coprime basis refinement


class CoprimeBasis:
    """Pairwise coprime q_i > 1 with exponent vectors for the inputs."""

    __slots__ = ("q", "inputs", "exponents")

    def __init__(self, q, inputs, exponents):
        self.q = q
        self.inputs = inputs
        self.exponents = exponents

    def reconstruct(self, n):
        out = 1
        for qi, e in zip(self.q, self.exponents[n]):
            out *= qi ** e
        return out

    def __repr__(self):
        return "CoprimeBasis(q=%r)" % (self.q,)


def factor_refine(inputs):
    """A coprime basis for a list of positive integers.

    Every input is a product of powers of the basis elements; basis elements
    are pairwise coprime and > 1; output is deterministic (sorted).
    """
    base = []

    def insert(m):
        if m <= 1:
            return
        for i, b in enumerate(base):
            g = math.gcd(m, b)
            if g > 1:
                base.pop(i)
                insert(g)
                insert(b // g)
                insert(m // g)
                return
        base.append(m)

    for n in inputs:
        if n < 1:
            raise ValueError("inputs must be positive")
        insert(int(n))
    base.sort()
    exps = []
    for n in inputs:
        row = []
        for q in base:
            e = 0
            m = int(n)
            while m % q == 0:
                m //= q
                e += 1
            row.append(e)
        exps.append(row)
    return CoprimeBasis(base, [int(n) for n in inputs], exps)


# ---------------------------------------------------------------------------
# The exact factorization-free finite part


class _IntRing:
    """Plain Z as a duck ring (fast exact duplication of integer coords)."""

    name = "Z"
    zero = 0
    one = 1

    @staticmethod
    def coerce(a):
        a = Fraction(a)
        assert a.denominator == 1
        return a.numerator

    @staticmethod
    def from_int(a):
        return int(a)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def is_zero(a):
        return a == 0


def _delta_mod(x, model, n):
    """Duplication of integer Kummer coordinates computed in Z/n."""
    R = ModRing(n)
    ck = CurveKummer(RawModel(R, [Fraction(c) for c in model.f]))
    return [int(c) for c in ck.duplicate(tuple(R.coerce(c) for c in x))]


def _delta_int(x, model):
    ck = CurveKummer(RawModel(_IntRing(), model.f))
    return list(ck.duplicate(tuple(int(c) for c in x)))


def finite_part_nofact(x, model):
    """mu-tilde^f(P) = sum mu_i * log q_i, exactly, without factoring.

    `x` must be primitive integer Kummer coordinates on an integral H = 0
    model.  Returns a list of (q_i, mu_i) with pairwise coprime integers q_i
    and exact rationals mu_i; the empty list means the finite part is 0.
    """
    x = [int(c) for c in x]
    if _gcd_all(x) != 1:
        raise ValueError("coordinates must be primitive")
    xp = _delta_int(x, model)
    g0 = _gcd_all(xp)
    if g0 == 0:
        raise ValueError("duplication vanished (singular input)")
    x = [c // g0 for c in xp]
    d_full = _int_delta(model) // 16
    D = _part_supported_on(d_full, g0)
    B = D.bit_length() - 1
    if B <= 1:
        return []
    M = max(2, (B + 4) ** 2 // 3)
    m = 0
    cap = B ** 3 * M ** 2 // 3
    while 4 ** (m + 1) <= cap:
        m += 1
    # the n-th pass only needs precision D^(m+1-n) g0, so the working
    # modulus shrinks as the loop advances
    fints = [Fraction(c) for c in model.f]
    gs = [g0]
    for n in range(m):
        modulus = D ** (m + 1 - n) * g0
        ck = CurveKummer(RawModel(ModRing(modulus), fints))
        xp = [int(c) % modulus for c in ck.duplicate(
            tuple(c % modulus for c in x))]
        gn = math.gcd(D, _gcd_all(xp))
        gs.append(gn)
        x = [c // gn for c in xp]
    basis = factor_refine(gs)
    out = []
    for i, q in enumerate(basis.q):
        a = Fraction(0)
        for n in range(len(gs)):
            a += Fraction(basis.exponents[n][i], 4 ** (n + 1))
        mu = _fraction_in_interval(a, B ** 2 * M ** 2, B * M)
        if mu != 0:
            out.append((q, mu))
    return out


def finite_part_direct(x, model, digits=30):
    """Numeric mu-tilde^f via the mod-D^(m+2) duplication loop (oracle)."""
    x = [int(c) for c in x]
    if _gcd_all(x) != 1:
        raise ValueError("coordinates must be primitive")
    D = _int_delta(model) // 16
    if D <= 1:
        return mp.mpf(0)
    d_bits = int(digits * math.log2(10)) + 4
    m = int(d_bits / 2 + max(0.0, math.log2(math.log2(max(D, 4)))) + 2)
    modulus = D ** (m + 2)
    with mp.workdps(digits + 10):
        acc = mp.mpf(0)
        x = [c % modulus for c in x]
        for n in range(m + 1):
            xp = _delta_mod(x, model, modulus)
            gn = math.gcd(D, _gcd_all(xp))
            acc += mp.mpf(0.25) ** (n + 1) * mp.log(gn)
            x = [c // gn for c in xp]
        return acc


def finite_part_value(pairs, digits=30):
    """Numeric value of a formal sum [(q_i, mu_i)] of logarithms."""
    with mp.workdps(digits + 10):
        acc = mp.mpf(0)
        for q, mu in pairs:
            acc += mp.mpf(mu.numerator) / mu.denominator * mp.log(q)
        return acc


# ---------------------------------------------------------------------------
# Canonical height


class HeightDecomposition:
    """h(P) split into finite and archimedean corrections, and the result."""

    __slots__ = ("naive_h", "finite_part", "arch_part", "hhat", "digits")

    def __init__(self, naive_h, finite_part, arch_part, hhat, digits):
        self.naive_h = naive_h
        self.finite_part = finite_part
        self.arch_part = arch_part
        self.hhat = hhat
        self.digits = digits

    def __repr__(self):
        return ("HeightDecomposition(naive=%s, hhat=%s)"
                % (self.naive_h, self.hhat))


def _is_origin(pt):
    return len(pt.a) == 1 and tuple(pt.inf_weights) in ((0, 0), (1, 1))


def require_model(model):
    if model.h is not None:
        raise ValueError("heights require an H = 0 model")
    if not model.is_integral():
        raise ValueError("model must have integer coefficients")


def primitive_kummer(pt, model):
    """Primitive integer Kummer coordinates of a rational Jacobian point."""
    return normalize_primitive(mumford_to_kummer(pt, model))


def canonical_height(pt, model, digits=30):
    """hhat(P) = h(kappa P) − mu-tilde^f(P) − mu-tilde_inf(kappa P)."""
    require_model(model)
    if _is_origin(pt):
        z = mp.mpf(0)
        return HeightDecomposition(z, [], z, z, digits)
    x = primitive_kummer(pt, model)
    pairs = finite_part_nofact(x, model)
    with mp.workdps(digits + 10):
        naive = mp.log(max(abs(c) for c in x))
        fin = finite_part_value(pairs, digits)
        arch = mu_arch(x, model, digits=digits)
        hhat = naive - fin - arch
    return HeightDecomposition(naive, pairs, arch, hhat, digits)


def naive_height(x, digits=30):
    """Standard naive height of primitive integer Kummer coordinates."""
    with mp.workdps(digits + 10):
        return mp.log(max(abs(int(c)) for c in x))


def modified_naive_height(x, model, digits=30):
    """h'(x) = sum_v log max{|x1|_v, |x2|_v, |x3|_v, |x4|_v/||F||_v}."""
    require_model(model)
    x = [int(c) for c in x]
    if _gcd_all(x) != 1:
        raise ValueError("coordinates must be primitive")
    fnorm = max(abs(int(Fraction(c))) for c in model.f)
    g = _content([Fraction(c).numerator for c in model.f])
    with mp.workdps(digits + 10):
        val = mp.log(max(abs(x[0]), abs(x[1]), abs(x[2]),
                         mp.mpf(abs(x[3])) / fnorm))
        # only primes dividing the coefficient content contribute at finite v
        facs, leftover = partial_factor(g, budget=10.0)
        assert leftover == 1
        for p, e in facs.items():
            v123 = min(_vp(abs(c0), p) if c0 else e + 1 for c0 in x[:3])
            v4 = _vp(abs(x[3]), p) if x[3] else e + 1
            val += max(-v123, e - v4) * mp.log(p)
        return val


def _vp(n, p):
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Pairing, regulator, lattice tools


def height_pairing(points, model, digits=30):
    """Gram matrix <P_i, P_j> = (hhat(P_i+P_j) − hhat P_i − hhat P_j)/2.

    Returns (gram, hhats) with gram an mp.matrix and hhats the diagonal.
    """
    require_model(model)
    n = len(points)
    hh = [canonical_height(p, model, digits).hhat for p in points]
    gram = mp.matrix(n, n)
    for i in range(n):
        gram[i, i] = hh[i]
        for j in range(i + 1, n):
            s = cantor_add(points[i], points[j], model)
            hs = canonical_height(s, model, digits).hhat
            gram[i, j] = gram[j, i] = (hs - hh[i] - hh[j]) / 2
    return gram, hh


def regulator(gram):
    return mp.det(gram)


def gram_lll(gram, delta=0.99):
    """LLL-reduce a positive-definite Gram matrix.

    Returns (U, reduced) with U an integer transformation and
    reduced = U * gram * U^T; the sorted diagonal of `reduced` gives
    upper bounds for the successive minima.
    """
    n = gram.rows
    G = mp.matrix(gram)
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def gso():
        B = [mp.mpf(0)] * n
        muc = [[mp.mpf(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i):
                s = G[i, j]
                for k in range(j):
                    s -= muc[i][k] * muc[j][k] * B[k]
                muc[i][j] = s / B[j]
            s = G[i, i]
            for k in range(i):
                s -= muc[i][k] ** 2 * B[k]
            B[i] = s
        return B, muc

    def rowop(i, j, q):
        # b_i <- b_i - q b_j
        for k in range(n):
            U[i][k] -= q * U[j][k]
        for k in range(n):
            if k not in (i, j):
                G[i, k] = G[k, i] = G[i, k] - q * G[j, k]
        G[i, i] = G[i, i] - 2 * q * G[i, j] + q * q * G[j, j]
        G[i, j] = G[j, i] = G[i, j] - q * G[j, j]

    def swap(i, j):
        U[i], U[j] = U[j], U[i]
        for k in range(n):
            G[i, k], G[j, k] = G[j, k], G[i, k]
        for k in range(n):
            G[k, i], G[k, j] = G[k, j], G[k, i]

    k = 1
    guard = 0
    while k < n and guard < 100000:
        guard += 1
        B, muc = gso()
        for j in range(k - 1, -1, -1):
            q = int(mp.nint(muc[k][j]))
            if q:
                rowop(k, j, q)
                B, muc = gso()
        if B[k] >= (delta - muc[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            k = max(k - 1, 1)
    return U, G


def reduced_norms(gram, delta=0.99):
    """Sorted diagonal of the LLL-reduced Gram (minima upper bounds)."""
    _u, red = gram_lll(gram, delta)
    return sorted(red[i, i] for i in range(red.rows))


# Exact values of gamma_r^r for r <= 8; Blichfeldt's bound beyond.
_HERMITE_POW = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2),
                4: Fraction(4), 5: Fraction(8), 6: Fraction(64, 3),
                7: Fraction(64), 8: Fraction(256)}


def hermite_constant_pow(r):
    """Upper bound for gamma_r^r (exact for r <= 8)."""
    if r in _HERMITE_POW:
        return mp.mpf(_HERMITE_POW[r].numerator) / _HERMITE_POW[r].denominator
    return (mp.mpf(2) / mp.pi) ** r * mp.gamma(2 + mp.mpf(r) / 2) ** 2


def index_bound(reg, minima, B):
    """I <= sqrt(R * gamma_r^r / prod_j min{m_j, B}) for a saturation step."""
    r = len(minima)
    if B <= 0:
        raise ValueError("enumeration bound must be positive")
    prod = mp.mpf(1)
    for m in minima:
        prod *= min(mp.mpf(m), mp.mpf(B))
    val = mp.sqrt(mp.mpf(reg) * hermite_constant_pow(r) / prod)
    return int(mp.floor(val))


# ---------------------------------------------------------------------------
# Height difference bound


class HeightBoundReport:
    """beta-tilde with h'(P) <= hhat(P) + beta-tilde, and its provenance."""

    __slots__ = ("entries", "arch_beta", "content", "total", "warnings",
                 "digits")

    def __init__(self, entries, arch_beta, content, total, warnings, digits):
        self.entries = entries
        self.arch_beta = arch_beta
        self.content = content
        self.total = total
        self.warnings = warnings
        self.digits = digits

    def finite_sum(self):
        with mp.workdps(self.digits + 10):
            acc = mp.log(self.content) if self.content > 1 else mp.mpf(0)
            for e in self.entries:
                b = e["beta"]
                acc += mp.mpf(b.numerator) / b.denominator * mp.log(e["p"])
            return acc

    def __repr__(self):
        return "HeightBoundReport(total=%s)" % self.total


def _even_square_root_mod4(f1):
    """h with coefficients in {0,1}, deg <= 3, f1 == h^2 (mod 4), or None."""
    for mask in range(16):
        h = [(mask >> i) & 1 for i in range(4)]
        sq = [0] * 7
        for i in range(4):
            for j in range(4):
                sq[i + j] += h[i] * h[j]
        if all((a - b) % 4 == 0 for a, b in zip(f1, sq)):
            return h
    return None


def height_difference_bound(model, digits=30, dps=None, iterations=12,
                            factor_budget=30.0):
    """beta-tilde such that h'(P) <= hhat(P) + beta-tilde on J(Q) \\ {O}.

    Per-place: content exponents e_p split off, the p = 2 completed-square
    model used when F is congruent to a square mod 4, rational bounds for
    even e_p and geometric (gamma/3) bounds for odd e_p; archimedean part
    from the scaled phi-iteration; total = arch + sum beta_p log p + log g.
    """
    require_model(model)
    f = [int(Fraction(c)) for c in model.f]
    g = _content(f)
    if dps is None:
        dps = max(2 * digits + 20, 60)
    warnings = []
    pc = partition_coefficients(model, scaled=True, dps=dps)
    arch = phi_iterate_bound(pc, iterations=iterations).value
    disc = binary_disc6(f)
    facs, leftover = partial_factor(2 * abs(disc), budget=factor_budget)
    entries = []
    if leftover > 1:
        # unfactored part: fall back to the universal bound on that part
        warnings.append("factorization incomplete; using (1/4) log D' for "
                        "the unfactored part")
    for p in sorted(facs):
        e_p = _vp(g, p)
        f1 = [c // p ** e_p for c in f]
        beta_extra = Fraction(0)
        h2 = _even_square_root_mod4(f1) if p == 2 else None
        if h2 is not None:
            f2 = [(a - b) // 4 for a, b in
                  zip(f1, _square_coeffs(h2))]
            model1 = CurveModel(f2, h2, check=False)
            beta_extra = Fraction(2)
        else:
            model1 = CurveModel(f1, check=False)
        pb = place_bounds(model1, LocalPlace.prime(p))
        if e_p % 2 == 0:
            beta_p = pb.beta + beta_extra
        else:
            beta_p = Fraction(pb.gamma, 3) + beta_extra
        entries.append({"p": p, "vdelta": pb.vdelta, "e_p": e_p,
                        "beta": beta_p, "rtype": pb.rtype.tag,
                        "method": pb.method})
    with mp.workdps(digits + 10):
        total = mp.mpf(arch)
        if g > 1:
            total += mp.log(g)
        for e in entries:
            b = e["beta"]
            total += mp.mpf(b.numerator) / b.denominator * mp.log(e["p"])
        if leftover > 1:
            total += mp.log(leftover) / 4
    return HeightBoundReport(entries, arch, g, total, warnings, digits)


def _square_coeffs(h):
    sq = [0] * 7
    for i in range(4):
        for j in range(4):
            sq[i + j] += h[i] * h[j]
    return sq
