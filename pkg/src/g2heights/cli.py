"""Command-line front end: heights, local corrections, bounds, search.

Subcommands operate on curve/point JSON files and emit either readable text
or machine-readable JSON reports.  All randomized internals are seeded, so
identical inputs give identical output (modulo the timing field).  Every
height-producing command first runs a quick arithmetic self-check of the
Kummer tables; `selftest` runs the full oracle gates.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from mpmath import mp

from .curve import (BASE_Q, CurveModel, _coeff_from_json, _coeff_to_json,
                    classify_special_fiber, infer_reduction_type)
from .errors import G2Error
from .fields import FpField
from .curve import RawModel
from .globalheight import (canonical_height, finite_part_value, gram_lll,
                           height_difference_bound, height_pairing,
                           partial_factor, reduced_norms, regulator)
from .jacobian import (MumfordPoint, cantor_add, cantor_neg, make_point,
                       lift_to_jacobian, mumford_to_kummer,
                       random_split_point)
from .kummer import CurveKummer, curve_kummer, normalize_primitive
from .localarch import (ComplexField, _complex_model, eps_arch, mu_arch,
                        partition_coefficients)
from .localnonarch import eps, mu_fast
from .places import LocalPlace
from .enumerate_points import (SearchConfig, enumerate_bounded,
                               points_below_canonical)

VERSION = "0.1.0"


class SelfTestFailure(G2Error):
    """An arithmetic identity gate failed (internal validation error)."""


# ---------------------------------------------------------------------------
# I/O helpers


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_curve(path):
    return CurveModel.from_json(_load_json(path))


def _coerce_point(obj, model):
    """A point JSON object -> (MumfordPoint or None, kummer coords).

    Accepts {"a": [...], "b": [...]} (Mumford) or {"kummer": [x1..x4]}.
    """
    base = model.base
    if "kummer" in obj:
        x = tuple(_coeff_from_json(c, base) for c in obj["kummer"])
        return None, x
    a = [_coeff_from_json(c, base) for c in obj["a"]]
    b = [_coeff_from_json(c, base) for c in obj.get("b", [])]
    pt = make_point(model, a, b)
    return pt, mumford_to_kummer(pt, model)


def _point_as_mumford(obj, model):
    pt, x = _coerce_point(obj, model)
    if pt is not None:
        return pt
    lifts = lift_to_jacobian(normalize_primitive(x), model)
    if not lifts:
        raise ValueError("kummer coordinates do not lift to a rational point")
    return lifts[0]


def _mumford_json(pt, base):
    return {"a": [_coeff_to_json(c, base) for c in pt.a],
            "b": [_coeff_to_json(c, base) for c in pt.b],
            "inf_weights": list(pt.inf_weights)}


def _real_str(x, digits):
    with mp.workdps(digits + 10):
        return mp.nstr(mp.mpf(x), digits)


def _exact_str(v):
    return str(v)


def _prec(args):
    digits = args.prec
    ceiling = int(os.environ.get("KH_PREC_CEILING", "0") or 0)
    warn = None
    if ceiling and digits > ceiling:
        digits = ceiling
        warn = "precision capped at %d digits by KH_PREC_CEILING" % ceiling
    return digits, warn


def _emit(args, payload, started):
    payload["timing"] = round(time.perf_counter() - started, 6)
    if args.json:
        json.dump(payload, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")
    else:
        _print_human(payload)
    return 0


def _print_human(payload, prefix=""):
    for k, v in payload.items():
        if isinstance(v, dict):
            print("%s%s:" % (prefix, k))
            _print_human(v, prefix + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            print("%s%s:" % (prefix, k))
            for item in v:
                if isinstance(item, dict):
                    print("%s  - %s" % (prefix, json.dumps(item, default=str)))
                else:
                    print("%s  - %s" % (prefix, item))
        else:
            print("%s%s: %s" % (prefix, k, v))


def _report(command, args, results, warnings=(), extra_inputs=None):
    inputs = {}
    for name in ("curve", "point", "points", "place"):
        v = getattr(args, name, None)
        if v is not None:
            inputs[name] = v
    if extra_inputs:
        inputs.update(extra_inputs)
    return {"command": command, "version": VERSION,
            "seed": getattr(args, "seed", None),
            "prec": getattr(args, "prec", None),
            "inputs": inputs, "warnings": list(warnings),
            "results": results}


# ---------------------------------------------------------------------------
# Arithmetic identity gates


def _proportional(F, u, v):
    """Projective equality of coordinate vectors over a duck field."""
    u, v = list(u), list(v)
    if all(F.is_zero(c) for c in u) or all(F.is_zero(c) for c in v):
        return False
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            lhs = F.mul(u[i], v[j])
            rhs = F.mul(u[j], v[i])
            if not F.eq(lhs, rhs):
                return False
    return True


def _sym_outer(F, u, v):
    """u_i v_j + u_j v_i off the diagonal, u_i v_i on it (the pair-of-points
    matrix matching the biquadratic form normalization)."""
    return [F.mul(u[i], v[i]) if i == j
            else F.add(F.mul(u[i], v[j]), F.mul(u[j], v[i]))
            for i in range(4) for j in range(4)]


_GATE_PRIMES = (10007, 10009, 10037, 10039, 20011, 20021, 30011)


def _kummer_gate(rng, samples):
    """Exact duplication / biquadratic identities on random curves over Fp.

    Checks, per sample: kappa(2P) parallel to delta(kappa P); B(w, z)
    matching the symmetrized outer product of kappa(P+Q), kappa(P-Q); and
    the same identity after duplicating both arguments.
    """
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > 60 * samples:
            raise SelfTestFailure("could not generate enough gate samples")
        p = _GATE_PRIMES[attempts % len(_GATE_PRIMES)]
        F = FpField(p)
        model = RawModel(F, [F.coerce(rng.randrange(p)) for _ in range(7)])
        if F.is_zero(model.discriminant()):
            continue
        try:
            P1 = random_split_point(model, rng)
            Q1 = random_split_point(model, rng)
            two = cantor_add(P1, P1, model)
            s = cantor_add(P1, Q1, model)
            d = cantor_add(P1, cantor_neg(Q1, model), model)
        except (G2Error, RuntimeError):
            continue
        if two.is_identity() or s.is_identity() or d.is_identity():
            continue
        ck = CurveKummer(model)
        w = mumford_to_kummer(P1, model)
        z = mumford_to_kummer(Q1, model)
        if not _proportional(F, ck.duplicate(w), mumford_to_kummer(two, model)):
            raise SelfTestFailure("kappa(2P) is not parallel to delta(kappa P)")
        u = mumford_to_kummer(s, model)
        v = mumford_to_kummer(d, model)
        bmat = [c for row in ck.biquadratic(w, z) for c in row]
        if not _proportional(F, bmat, _sym_outer(F, u, v)):
            raise SelfTestFailure("B(w, z) does not match kappa(P+-Q)")
        b2 = [c for row in ck.biquadratic(ck.duplicate(w),
                                          ck.duplicate(z)) for c in row]
        if not _proportional(F, b2,
                             _sym_outer(F, ck.duplicate(u), ck.duplicate(v))):
            raise SelfTestFailure("B(delta w, delta z) does not match "
                                  "delta kappa(P+-Q)")
        done += 1
    return done


def _arch_gate(digits=15):
    """mu(x) = eps(x)/4 + mu(delta x)/4 on sample archimedean points, and
    the residual gate of the partition-coefficient derivation."""
    model = CurveModel([1, 1, 0, 1, 0, 1, 0])
    partition_coefficients(model, dps=40)
    ck = curve_kummer(_complex_model(model))
    for x in [(1, -1, 1, 1), (2, 1, 1, -3), (1, 0, 2, 5)]:
        xc = tuple(mp.mpc(c) for c in x)
        lhs = mu_arch(x, model, digits=digits)
        rhs = (eps_arch(xc, ck)
               + mu_arch(ck.duplicate(xc), model, digits=digits)) / 4
        if abs(lhs - rhs) > mp.mpf(10) ** (-digits + 3):
            raise SelfTestFailure("archimedean mu recursion failed")
    return True


_quick_gate_done = False


def _quick_gate(seed=0):
    """Cheap pre-flight identity check before any height command."""
    global _quick_gate_done
    if _quick_gate_done:
        return
    _kummer_gate(random.Random(seed), 3)
    _quick_gate_done = True


# ---------------------------------------------------------------------------
# Subcommands


def cmd_invariants(args):
    started = time.perf_counter()
    model = _load_curve(args.curve)
    inv = model.igusa()
    warnings = []
    results = {
        "igusa": {k: _coeff_to_json(getattr(inv, k), model.base)
                  for k in ("J2", "J4", "J6", "J8", "J10", "I4", "I12")},
        "classification": classify_special_fiber(inv).name,
    }
    if model.base == BASE_Q and model.is_integral():
        disc = model.discriminant()
        num = abs(disc.numerator)
        facs, leftover = partial_factor(2 * num, budget=args.factor_budget)
        if leftover > 1:
            warnings.append("discriminant only partially factored; "
                            "omitting primes dividing %d" % leftover)
        bad = []
        for p in sorted(facs):
            place = LocalPlace.prime(p)
            if place.val(disc) <= 0 and p != 2:
                continue
            try:
                rt = infer_reduction_type(inv, place)
                tag = rt.tag
            except G2Error as exc:
                tag = "Unknown"
                warnings.append("p=%d: %s" % (p, exc))
            bad.append({"p": p, "v_disc": place.val(disc), "type": tag})
        results["bad_primes"] = bad
    return _emit(args, _report("invariants", args, results, warnings), started)


def cmd_mu(args):
    started = time.perf_counter()
    digits, warn = _prec(args)
    warnings = [warn] if warn else []
    model = _load_curve(args.curve)
    _quick_gate(args.seed)
    _, x = _coerce_point(_load_json(args.point), model)
    place_str = args.place.strip()
    if model.base == BASE_Q and place_str in ("inf", "infinity", "oo"):
        xi = normalize_primitive(x)
        results = {"place": "inf",
                   "mu": _real_str(mu_arch(xi, model, digits=digits), digits)}
    else:
        base = "Q" if model.base == BASE_Q else "Qt"
        place = LocalPlace.parse(place_str, base=base)
        res = mu_fast(x, place, model)
        results = {"place": place_str, "mu": _exact_str(res.mu),
                   "epsilon": _exact_str(eps(x, place, model))}
    return _emit(args, _report("mu", args, results, warnings), started)


def cmd_height(args):
    started = time.perf_counter()
    digits, warn = _prec(args)
    warnings = [warn] if warn else []
    model = _load_curve(args.curve)
    _quick_gate(args.seed)
    pt = _point_as_mumford(_load_json(args.point), model)
    dec = canonical_height(pt, model, digits=digits)
    results = {
        "hhat": _real_str(dec.hhat, digits),
        "naive": _real_str(dec.naive_h, digits),
        "finite_part": [{"base": str(q), "mu": str(e)}
                        for q, e in dec.finite_part],
        "finite_part_value": _real_str(
            finite_part_value(dec.finite_part, digits), digits),
        "arch_part": _real_str(dec.arch_part, digits),
    }
    return _emit(args, _report("height", args, results, warnings), started)


def cmd_bound(args):
    started = time.perf_counter()
    digits, warn = _prec(args)
    warnings = [warn] if warn else []
    model = _load_curve(args.curve)
    _quick_gate(args.seed)
    rep = height_difference_bound(model, digits=digits,
                                  factor_budget=args.factor_budget)
    warnings += rep.warnings
    results = {
        "total": _real_str(rep.total, digits),
        "arch": _real_str(rep.arch_beta, digits),
        "content": str(rep.content),
        "finite_sum": _real_str(rep.finite_sum(), digits),
        "places": [{"p": e["p"], "beta": str(e["beta"]),
                    "v_disc": e["vdelta"], "e_p": e["e_p"],
                    "type": e["rtype"], "method": e["method"]}
                   for e in rep.entries],
    }
    return _emit(args, _report("bound", args, results, warnings), started)


def cmd_pairing(args):
    started = time.perf_counter()
    digits, warn = _prec(args)
    warnings = [warn] if warn else []
    model = _load_curve(args.curve)
    _quick_gate(args.seed)
    pts = [_point_as_mumford(obj, model) for obj in _load_json(args.points)]
    gram, hh = height_pairing(pts, model, digits=digits)
    norms = reduced_norms(gram)
    results = {
        "heights": [_real_str(h, digits) for h in hh],
        "gram": [[_real_str(gram[i, j], digits) for j in range(len(pts))]
                 for i in range(len(pts))],
        "regulator": _real_str(regulator(gram), digits),
        "reduced_norms": [_real_str(n, digits) for n in norms],
    }
    return _emit(args, _report("pairing", args, results, warnings), started)


def cmd_enumerate(args):
    started = time.perf_counter()
    digits, warn = _prec(args)
    warnings = [warn] if warn else []
    model = _load_curve(args.curve)
    _quick_gate(args.seed)
    sieve = None
    if args.sieve is not None:
        s = args.sieve.strip()
        sieve = tuple(int(p) for p in s.split(",") if p) if s else ()
    count = 0

    def emit_point(fp):
        obj = {"kummer": [str(c) for c in fp.kummer],
               "hprime": _real_str(fp.hprime, digits),
               "lifts": [_mumford_json(q, model.base) for q in fp.lifts]}
        if args.json:
            print(json.dumps(obj, default=str))
        else:
            print("(%s) h'=%s lifts=%d" % (" : ".join(str(c)
                  for c in fp.kummer), obj["hprime"], len(fp.lifts)))

    if args.canonical_bound is not None:
        cfg = None
        if sieve is not None:
            big = () if sieve == () else None
            cfg = (SearchConfig(1, sieve, big) if big is not None
                   else SearchConfig(1, sieve))
        found, rep = points_below_canonical(
            model, Fraction(args.canonical_bound), digits=digits, cfg=cfg)
        warnings += rep.warnings
        for fp in found:
            emit_point(fp)
            count += 1
        results = {"count": count, "height_bound": _real_str(rep.total, digits)}
    else:
        if args.naive_bound is None:
            raise ValueError("enumerate needs --naive-bound or "
                             "--canonical-bound")
        if sieve == ():
            cfg = SearchConfig(args.naive_bound, (), (), args.jobs)
        elif sieve is None:
            cfg = SearchConfig(args.naive_bound, jobs=args.jobs)
        else:
            cfg = SearchConfig(args.naive_bound, sieve, jobs=args.jobs)
        for fp in enumerate_bounded(model, cfg):
            emit_point(fp)
            count += 1
        results = {"count": count, "bound": args.naive_bound}
    payload = _report("enumerate", args, results, warnings)
    payload["timing"] = round(time.perf_counter() - started, 6)
    if args.json:
        print(json.dumps(payload, default=str))
    else:
        print("found %d point(s)" % count)
    return 0


def cmd_selftest(args):
    started = time.perf_counter()
    rng = random.Random(args.seed)
    n = _kummer_gate(rng, args.samples)
    _arch_gate()
    results = {"kummer_samples": n, "arch_gate": "ok"}
    return _emit(args, _report("selftest", args, results), started)


def cmd_tables(args):
    from .kummer import raw_tables
    started = time.perf_counter()
    return _emit(args, _report("tables", args, raw_tables()), started)


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser():
    top = argparse.ArgumentParser(
        prog="g2h",
        description="Canonical heights and local data on genus-2 Jacobians")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, curve=True):
        if curve:
            p.add_argument("--curve", required=True, help="curve JSON file")
        p.add_argument("--prec", type=int, default=30,
                       help="working precision in decimal digits")
        p.add_argument("--json", action="store_true",
                       help="machine-readable JSON output")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("invariants", help="Igusa invariants and reduction "
                       "types at bad primes")
    common(p)
    p.add_argument("--factor-budget", type=float, default=30.0)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("mu", help="local height correction at one place")
    common(p)
    p.add_argument("--point", required=True, help="point JSON file")
    p.add_argument("--place", required=True,
                   help='prime p, "t-a" (function field), or "inf"')
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("height", help="canonical height of a point")
    common(p)
    p.add_argument("--point", required=True, help="point JSON file")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("bound", help="naive-vs-canonical height difference "
                       "bound")
    common(p)
    p.add_argument("--factor-budget", type=float, default=30.0)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("pairing", help="height pairing Gram matrix and "
                       "regulator")
    common(p)
    p.add_argument("--points", required=True,
                   help="JSON file with a list of points")
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("enumerate", help="search rational points of bounded "
                       "height")
    common(p)
    p.add_argument("--naive-bound", type=int)
    p.add_argument("--canonical-bound", type=str)
    p.add_argument("--sieve", type=str,
                   help='comma-separated sieve primes; "" disables sieving')
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("selftest", help="run the arithmetic oracle gates")
    common(p, curve=False)
    p.add_argument("--samples", type=int, default=120)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("tables", help="dump the generic Kummer tables")
    common(p, curve=False)
    p.set_defaults(func=cmd_tables)

    return top


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except SelfTestFailure as exc:
        print("selftest failure: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except G2Error as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
