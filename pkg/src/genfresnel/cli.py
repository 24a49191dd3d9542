"""Command line interface: ``genfresnel {fresnel,expand,sweep}``.

Every command prints a JSON run report on stdout.  Complex numbers are
written as ``{"re": ..., "im": ...}`` and every computed value carries a
``provenance`` of ``closed_form``, ``quadrature`` or ``extrapolated``.

Exit codes: 0 success, 2 invalid input or violated precondition, 3 numerical
non-convergence (including fits that hit the quadrature noise floor).

The environment variable ``GENFRESNEL_THREADS`` sets the number of worker
threads used for per-lambda evaluations in sweeps (default 1).  Results are
always reported in grid order.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .amplitudes import parse_amplitude
from .cutoff import CUTOFF_KINDS, get_cutoff
from .errors import ConvergenceError, DomainError, GammaOverflowError
from .fresnel import POLE_TOL, Sign, closed_form, nearest_pole
from .regularization import abel_oracle, default_schedule, regularized_integral, rotated_contour_oracle
from .stationary import (
    NOISE_MARGIN,
    LambdaGrid,
    decay_slope_fit,
    expansion_vs_oracle,
    full_line_expansion,
    half_line_expansion,
    oracle_value,
)

SCHEMA_VERSION = "1.0"
CSV_COLUMNS = ("lambda", "oracle_re", "oracle_im", "partial_re", "partial_im", "abs_remainder")
#: relative distance to a pole below which a warning is printed
NEAR_POLE = 1e-2

AMPLITUDE_HELP = (
    "amplitude spec: 'gaussian' (exp(-x^2/2)), 'poly:c0,c1,...;gaussian' "
    "((c0 + c1 x + ...) exp(-x^2/2)) or 'bump:lo,hi' (bump supported on (lo, hi))"
)


def cval(z, provenance):
    z = complex(z)
    return {"re": z.real, "im": z.imag, "provenance": provenance}


def _cplx(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _threads():
    raw = os.environ.get("GENFRESNEL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"GENFRESNEL_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise DomainError("GENFRESNEL_THREADS must be at least 1")
    return n


def _map(fn, items):
    n = _threads()
    if n == 1:
        return list(map(fn, items))
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# fresnel


def cmd_fresnel(args, report):
    sign = Sign.parse(args.sign)
    p, q = args.p, args.q
    report["inputs"] = {"p": p, "q": q, "sign": sign.label, "method": args.method, "chi": args.chi, "tol": args.tol}
    warnings = report.setdefault("warnings", [])
    if not p > 0:
        raise DomainError(f"p must be positive (got {p})")
    pole = nearest_pole(p, q, sign)
    if pole is not None:
        j = round(-pole.location.real / p)
        dist = abs(q - pole.location)
        if POLE_TOL * max(1.0, p * j) <= dist < NEAR_POLE * max(1.0, p * j):
            msg = (f"q = {q} is near the pole q = {pole.location.real:g} (order {pole.order}, "
                   f"residue {pole.residue.real:+.6g}{pole.residue.imag:+.6g}i)")
            warnings.append({"message": msg, "pole": _cplx(pole.location), "residue": _cplx(pole.residue)})
            print(f"warning: {msg}", file=sys.stderr)
    exact = closed_form(p, q, sign)
    out = {"closed_form": cval(exact, "closed_form")}
    if args.method == "closed":
        value = exact
    elif args.method == "rotated":
        value = rotated_contour_oracle(p, q, sign)
        out["value"] = cval(value, "quadrature")
    elif args.method == "oscillatory":
        sched = dataclasses.replace(default_schedule(p, get_cutoff(args.chi)), rtol=args.tol)
        report["defaults"]["epsilon_schedule"] = sched.as_dict()
        res = regularized_integral(p, q, sign, args.chi, sched)
        value = res.value
        out["value"] = cval(value, "extrapolated")
        report["diagnostics"]["extrapolation"] = res.as_dict()
    else:
        if p != 1:
            raise DomainError("the abel method needs p = 1 (damping of the linear phase)")
        res = abel_oracle(q, sign=sign)
        value = res.value
        out["value"] = cval(value, "extrapolated")
        report["diagnostics"]["extrapolation"] = res.as_dict()
    if args.method != "closed":
        out["deviation_from_closed_form"] = abs(value - exact)
    report["outputs"] = out
    print(f"I({p:g}, {q:g}, {sign.label}) = {value.real:.10f} {value.imag:+.10f}i", file=sys.stderr)
    if args.method != "closed":
        print(f"deviation from closed form: {abs(value - exact):.3e}", file=sys.stderr)


# ---------------------------------------------------------------------------
# expand


def _expansion(args, a, sign):
    if args.domain == "line":
        if args.phase_power != int(args.phase_power):
            raise DomainError("the line domain needs an integer phase power")
        return full_line_expansion(int(args.phase_power), a, sign, args.order)
    return half_line_expansion(args.phase_power, a, sign, args.order)


def cmd_expand(args, report):
    sign = Sign.parse(args.sign)
    a = parse_amplitude(args.amplitude)
    report["inputs"] = {"phase_power": args.phase_power, "domain": args.domain, "amplitude": a.spec(),
                        "sign": sign.label, "order": args.order, "lambda": args.lam, "oracle": args.oracle}
    if args.lam < 1:
        raise DomainError("lambda must be >= 1")
    exp = _expansion(args, a, sign)
    partial = exp.evaluate(args.lam)
    power = int(args.phase_power) if args.domain == "line" else args.phase_power
    oracle = oracle_value(power, a, sign, args.lam, args.domain, args.oracle)
    report["outputs"] = {
        "terms": [{"exponent": e, "coefficient": cval(c, "closed_form")} for e, c in exp.terms],
        "remainder_exponent": exp.remainder_exponent,
        "partial_sum": cval(partial, "closed_form"),
        "oracle": cval(oracle.value, "quadrature"),
        "oracle_error_estimate": oracle.error,
        "abs_remainder": abs(oracle.value - partial),
    }
    for e, c in exp.terms:
        print(f"  lam^-{e:.6g}: {c.real:+.10f} {c.imag:+.10f}i", file=sys.stderr)
    print(f"partial sum: {partial.real:+.10e} {partial.imag:+.10e}i", file=sys.stderr)
    print(f"oracle:      {oracle.value.real:+.10e} {oracle.value.imag:+.10e}i", file=sys.stderr)


# ---------------------------------------------------------------------------
# sweep


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for lam, oracle, partial, rem in rows:
            w.writerow([repr(float(lam)), repr(oracle.real), repr(oracle.imag), repr(partial.real),
                        repr(partial.imag), repr(float(rem))])


def cmd_sweep(args, report):
    sign = Sign.parse(args.sign)
    report["inputs"] = {k: v for k, v in vars(args).items() if k not in ("func",)}
    if args.experiment == "chi-independence":
        return _sweep_chi(args, sign, report)
    if args.points < 4:
        raise DomainError("a sweep needs at least 4 points")
    grid = LambdaGrid.logspace(args.lambda_start, args.lambda_end, args.points)
    if grid.decades < 2.0 - 1e-9:
        raise DomainError("slope experiments need a lambda range of at least two decades")
    report["defaults"]["lambda_grid"] = list(grid.values)
    a = parse_amplitude(args.amplitude)
    if args.experiment == "remainder":
        power = int(args.phase_power) if args.domain == "line" else args.phase_power
        rep = expansion_vs_oracle(power, a, sign, args.order, grid, args.domain, args.oracle, map_fn=_map)
        rows = list(rep.rows())
        if args.out:
            _write_csv(args.out, rows)
        report["outputs"] = {
            "expansion": rep.expansion.as_dict(),
            "rows": [{"lambda": l, "oracle": cval(o, rep.oracle_kind if rep.oracle_kind == "quadrature" else "closed_form"),
                      "partial": cval(p, "closed_form"), "abs_remainder": r} for l, o, p, r in rows],
        }
        report["diagnostics"] = {
            "slope": None if rep.fit is None else rep.fit.slope,
            "threshold": rep.threshold,
            "slope_pass": rep.slope_pass,
            "envelope_constant": rep.envelope_constant,
            "envelope_ratio": rep.envelope_ratio,
            "envelope_pass": rep.envelope_pass,
            "passed": rep.passed,
            "notes": rep.notes,
        }
        if rep.notes:
            raise ConvergenceError("; ".join(rep.notes))
        return
    # decay: |I(lam)| of the weighted half-line integral
    results = _map(lambda lam: oracle_value(args.phase_power, a, sign, lam, "halfline", args.oracle, q=args.q),
                   grid.values)
    rows = [(lam, r.value, 0j, abs(r.value)) for lam, r in zip(grid.values, results)]
    if args.out:
        _write_csv(args.out, rows)
    threshold = -(args.q / args.phase_power - 1.0) + 0.1
    report["outputs"] = {"rows": [{"lambda": l, "oracle": cval(o, "quadrature"), "abs_value": r}
                                  for l, o, _, r in rows]}
    report["diagnostics"] = {"threshold": threshold}
    fit = decay_slope_fit([(l, r) for l, _, _, r in rows], errors=[r.error for r in results])
    report["diagnostics"].update({"slope": fit.slope, "passed": fit.slope <= threshold})


def _sweep_chi(args, sign, report):
    p, q = args.phase_power, args.q
    exact = closed_form(p, q, sign)
    kinds = args.chi_kinds
    results = _map(lambda k: regularized_integral(p, q, sign, k), kinds)
    rows = [(1.0, r.value, exact, abs(r.value - exact)) for r in results]
    if args.out:
        _write_csv(args.out, rows)
    dev = max((abs(a.value - b.value) for i, a in enumerate(results) for b in results[i + 1:]), default=0.0)
    report["outputs"] = {
        "closed_form": cval(exact, "closed_form"),
        "values": {k: cval(r.value, "extrapolated") for k, r in zip(kinds, results)},
        "error_estimates": {k: r.error_estimate for k, r in zip(kinds, results)},
    }
    report["diagnostics"] = {"max_pairwise_deviation": dev, "threshold": 2e-6, "passed": dev < 2e-6}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genfresnel", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fresnel", help="generalized Fresnel integral I(p, q)")
    f.add_argument("--p", type=float, required=True, help="phase exponent (x^p), p > 0")
    f.add_argument("--q", type=float, required=True, help="weight exponent (x^(q-1))")
    f.add_argument("--sign", default="plus", choices=["plus", "minus"])
    f.add_argument("--method", default="closed", choices=["closed", "rotated", "oscillatory", "abel"])
    f.add_argument("--chi", default="gaussian", choices=list(CUTOFF_KINDS), help="cutoff for --method oscillatory")
    f.add_argument("--tol", type=float, default=1e-8, help="relative extrapolation tolerance")
    f.set_defaults(func=cmd_fresnel)

    e = sub.add_parser("expand", help="stationary phase expansion vs quadrature oracle",
                       epilog=AMPLITUDE_HELP)
    e.add_argument("--phase-power", type=float, required=True)
    e.add_argument("--domain", default="line", choices=["halfline", "line"])
    e.add_argument("--amplitude", default="gaussian", help=AMPLITUDE_HELP)
    e.add_argument("--sign", default="plus", choices=["plus", "minus"])
    e.add_argument("--order", type=int, required=True, help="number of terms N (needs N + 1 > power)")
    e.add_argument("--lambda", dest="lam", type=float, required=True)
    e.add_argument("--oracle", default="auto", choices=["auto", "real", "contour", "exact"])
    e.set_defaults(func=cmd_expand)

    s = sub.add_parser("sweep", help="lambda sweeps: remainder order, decay, cutoff independence",
                       epilog=AMPLITUDE_HELP + ".  The chi-independence CSV has one row per cutoff kind "
                       "(lambda = 1, oracle = regularized value, partial = closed form).")
    s.add_argument("--experiment", required=True, choices=["remainder", "decay", "chi-independence"])
    s.add_argument("--phase-power", type=float, default=2.0)
    s.add_argument("--q", type=float, default=1.0, help="weight exponent for decay / chi-independence")
    s.add_argument("--domain", default="line", choices=["halfline", "line"])
    s.add_argument("--amplitude", default="gaussian", help=AMPLITUDE_HELP)
    s.add_argument("--sign", default="plus", choices=["plus", "minus"])
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--oracle", default="auto", choices=["auto", "real", "contour", "exact"])
    s.add_argument("--lambda-start", type=float, default=1e2)
    s.add_argument("--lambda-end", type=float, default=1e4)
    s.add_argument("--points", type=int, default=5)
    s.add_argument("--chi-kinds", nargs="+", default=list(CUTOFF_KINDS), choices=list(CUTOFF_KINDS))
    s.add_argument("--out", help="CSV output path")
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "argv": list(sys.argv[1:] if argv is None else argv),
        "defaults": {"noise_margin": NOISE_MARGIN},
        "diagnostics": {},
    }
    start = time.perf_counter()
    code = 0
    try:
        args.func(args, report)
    except DomainError as exc:
        report["error"] = {"kind": "validation", "message": str(exc)}
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except (ConvergenceError, GammaOverflowError) as exc:
        report["error"] = {"kind": "numerical", "message": str(exc)}
        print(f"error: {exc}", file=sys.stderr)
        code = 3
    report["exit_code"] = code
    report["wall_time_s"] = time.perf_counter() - start
    json.dump(_clean(report), sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")
    return code


def _clean(obj):
    """JSON-ready copy: complex as re/im, numpy scalars unwrapped, non-finite floats as null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return _clean(_cplx(obj))
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


if __name__ == "__main__":
    sys.exit(main())
