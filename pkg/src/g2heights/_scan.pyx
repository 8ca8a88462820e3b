# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Inner scan kernel for the projective triple search.

Walks (x2, x3) ranges for a fixed x1 stratum and keeps primitive triples
whose x4-discriminant D = K1^2 - 4 K2 K0 is a square residue modulo every
sieve prime.  Small primes use precomputed tables over (x1, x2, x3) mod p;
larger primes evaluate D by Horner from per-x2 coefficient rows (dco) and
test a per-prime square bitmap.  Both stages only discard triples where D
is provably a non-square, so the exact solver downstream never misses a
rational point.
"""


cdef inline long _gcd(long a, long b) nogil:
    cdef long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline long _mod(long a, long p) nogil:
    cdef long r = a % p
    if r < 0:
        r += p
    return r


def scan_pairs(long x1, long lo2, long hi2, long lo3, long hi3,
               const unsigned char[::1] tab, const long[::1] ps,
               const long[::1] offs,
               const long[:, :, ::1] dco, const long[::1] bp,
               const unsigned char[::1] sq, const long[::1] sqoffs):
    """Survivor (x2, x3) pairs in the given ranges for the x1 stratum.

    dco[b, k, j] is the coefficient of x3^k in D mod bp[b], evaluated at
    x2 = lo2 + j; sq[sqoffs[b] + r] marks r a square residue mod bp[b].
    """
    cdef list out = []
    cdef long x2, x3, p, idx, d, base
    cdef Py_ssize_t i, j, k, b, nt = ps.shape[0], nb = bp.shape[0]
    cdef bint ok
    for x2 in range(lo2, hi2 + 1):
        j = x2 - lo2
        for x3 in range(lo3, hi3 + 1):
            if _gcd(_gcd(x1, x2), x3) != 1:
                continue
            ok = True
            for i in range(nt):
                p = ps[i]
                idx = offs[i] + (_mod(x1, p) * p + _mod(x2, p)) * p \
                    + _mod(x3, p)
                if not tab[idx]:
                    ok = False
                    break
            if not ok:
                continue
            for b in range(nb):
                p = bp[b]
                base = sqoffs[b]
                d = dco[b, 8, j]
                for k in range(7, -1, -1):
                    d = _mod(d * x3 + dco[b, k, j], p)
                if not sq[base + d]:
                    ok = False
                    break
            if ok:
                out.append((x2, x3))
    return out
