"""Benchmark the compiled scan kernel against the numpy fallback.

Runs the stratum scan of the point search (residue tables plus big-prime
discriminant sieve) over the same ranges with both implementations and
reports wall times and survivor counts.  Usage:

    python3 benchmarks/bench_scan.py [N]
"""

import sys
import time

from g2heights.curve import CurveModel
from g2heights import enumerate_points as ep


def run_scan(model, n, use_kernel):
    primes = ep.good_sieve_primes(model, ep.DEFAULT_SIEVE)
    packed = ep._pack_tables(primes, ep._residue_tables(model, primes))
    big = ep._square_bitmaps(ep.DEFAULT_BIG_SIEVE)
    layers3 = ep._x3_layers(ep._x4_forms(model))
    saved = ep._scan
    if not use_kernel:
        ep._scan = None
    try:
        t0 = time.perf_counter()
        count = 0
        for x1 in range(0, n + 1):
            count += len(ep._scan_stratum(x1, n, packed, layers3, big))
        return count, time.perf_counter() - t0
    finally:
        ep._scan = saved


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    model = CurveModel([1, 1, 0, 1, 0, 1, 0])
    if ep._scan is None:
        print("compiled kernel not available; timing fallback only")
    else:
        ck, tk = run_scan(model, n, True)
        print("kernel : N=%4d  survivors=%7d  %8.3fs" % (n, ck, tk))
    cn, tn = run_scan(model, n, False)
    print("numpy  : N=%4d  survivors=%7d  %8.3fs" % (n, cn, tn))
    if ep._scan is not None:
        assert ck == cn, "kernel and fallback disagree"
        print("speedup: %.2fx" % (tn / tk))


if __name__ == "__main__":
    main()
