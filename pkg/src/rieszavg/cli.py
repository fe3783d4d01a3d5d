"""Command-line front end.

    rieszavg verify    -- run the full certificate, print the case table
    rieszavg case ID   -- drill into one tabulated quantity
    rieszavg xi        -- evaluate the radial profile at a direction
    rieszavg integral  -- the full averaging integral (mc or quadrature)
    rieszavg report    -- machine-readable report (json / csv)

Exit codes for `verify`: 0 all good, 1 the sign certificate failed,
2 a tabulated value mismatched beyond --tolerance, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import cases
from .cases import (MATCH_TOL, QUANTITY_IDS, QuadratureConfig,
                    evaluate_quantity, full_integral, report_to_csv,
                    report_to_dict, report_to_json, total_report)
from .regions import regions_to_json
from .xi import Direction, SphericalAngle, angles_to_direction, xi_n

_ENV_JOBS = "RIESZAVG_JOBS"


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--precision", choices=("float", "interval"),
                   default="float")
    p.add_argument("--abs-tol", type=float, default=1e-9)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--max-subdivisions", type=int, default=None,
                   help="adaptive interval budget / interval-mode cells "
                        "per axis")
    p.add_argument("--mc-samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=20240613)
    p.add_argument("--format", choices=("text", "json", "csv"),
                   default="text")
    p.add_argument("--jobs", type=int,
                   default=int(os.environ.get(_ENV_JOBS, "1")))
    p.add_argument("--tolerance", type=float, default=MATCH_TOL,
                   help="tabulated-value match tolerance")


def _config(args) -> QuadratureConfig:
    maxsub = args.max_subdivisions
    if maxsub is None:
        maxsub = 64 if args.precision == "interval" else 400
    return QuadratureConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                            max_subdivisions=maxsub,
                            mc_samples=args.mc_samples, rng_seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rieszavg",
        description="verify the sign of the half-sphere averaging "
                    "integral for the three-dimensional kernel profile")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the full certificate")
    _add_common(v)
    v.add_argument("--no-oracle", action="store_true",
                   help="skip the Monte Carlo consistency oracle")

    c = sub.add_parser("case", help="evaluate one tabulated quantity")
    c.add_argument("case_id", help="one of: " + ", ".join(QUANTITY_IDS))
    _add_common(c)

    x = sub.add_parser("xi", help="evaluate the radial profile")
    x.add_argument("--theta", type=float)
    x.add_argument("--phi", type=float)
    x.add_argument("--omega", type=float, nargs="+")
    _add_common(x)

    i = sub.add_parser("integral", help="full averaging integral")
    i.add_argument("--dim", type=int, default=3)
    i.add_argument("--method", choices=("mc", "quad"), default="quad")
    _add_common(i)

    r = sub.add_parser("report", help="full machine-readable report")
    _add_common(r)
    r.add_argument("--regions", action="store_true",
                   help="emit the region table instead")
    return p


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _print_report(report, fmt: str, stream):
    if fmt == "json":
        print(report_to_json(report), file=stream)
        return
    if fmt == "csv":
        print(report_to_csv(report), file=stream, end="")
        return
    header = (f"{'case':8s} {'kind':18s} {'value':>12s} {'error':>10s} "
              f"{'tabulated':>10s} {'match':>6s}")
    print(header, file=stream)
    print("-" * len(header), file=stream)
    for r in report.results:
        tab = "" if r.paper_value is None else _fmt(r.paper_value)
        ok = "yes" if r.passed(report.match_tolerance) else "NO"
        enc = ""
        if r.estimate.enclosure is not None:
            enc = (f"   [{r.estimate.enclosure[0]:.6g}, "
                   f"{r.estimate.enclosure[1]:.6g}]")
        print(f"{r.case_id:8s} {r.kind:18s} {_fmt(r.estimate.value):>12s} "
              f"{_fmt(r.estimate.error):>10s} {tab:>10s} {ok:>6s}{enc}",
              file=stream)
    print(f"closed-form sum: {_fmt(report.closed_form_sum)}", file=stream)
    print(f"bound sum:       {_fmt(report.bound_sum)}", file=stream)
    print(f"part E (<=0):    {_fmt(report.part_e_value)} (enters as 0)",
          file=stream)
    print(f"total upper bound: {_fmt(report.total_upper_bound)}",
          file=stream)
    if report.total_enclosure is not None:
        lo, hi = report.total_enclosure
        print(f"total enclosure: [{lo:.6g}, {hi:.6g}]", file=stream)
    if report.oracle_estimate is not None:
        o = report.oracle_estimate
        print(f"Monte Carlo oracle (full integral): {_fmt(o.value)} "
              f"+- {_fmt(o.error)}", file=stream)
    print(f"sign certificate: "
          f"{'NEGATIVE (pass)' if report.sign_conclusion else 'FAILED'}",
          file=stream)


def cmd_verify(args) -> int:
    cfg = _config(args)
    report = total_report(cfg, precision=args.precision,
                          include_oracle=not args.no_oracle, jobs=args.jobs)
    report.match_tolerance = args.tolerance
    _print_report(report, args.format, sys.stdout)
    if not report.sign_conclusion:
        return 1
    if not report.all_matched(args.tolerance):
        return 2
    return 0


def cmd_case(args) -> int:
    cfg = _config(args)
    result = evaluate_quantity(args.case_id, cfg, precision=args.precision)
    if args.format == "json":
        print(json.dumps(cases._result_dict(result), indent=2))
    else:
        print(f"{result.case_id}: value={_fmt(result.estimate.value)} "
              f"error={_fmt(result.estimate.error)} kind={result.kind}")
        if result.paper_value is not None:
            print(f"tabulated={_fmt(result.paper_value)} "
                  f"discrepancy={_fmt(result.discrepancy)} "
                  f"match={'yes' if result.passed(args.tolerance) else 'NO'}")
        if result.note:
            print(f"note: {result.note}")
    return 0


def cmd_xi(args) -> int:
    if args.omega is not None:
        comps = list(args.omega)
        norm = math.sqrt(sum(c * c for c in comps))
        if norm == 0:
            raise SystemExit("omega must be nonzero")
        if abs(norm - 1.0) > 1e-6:
            raise SystemExit(f"omega is not unit length (|omega|={norm:.8g})")
        if norm != 1.0:
            print(f"renormalizing omega by 1/{norm:.12g}", file=sys.stderr)
            comps = [c / norm for c in comps]
        value = xi_n(Direction(comps), len(comps))
    elif args.theta is not None and args.phi is not None:
        omega = angles_to_direction(SphericalAngle(args.theta, args.phi))
        value = xi_n(omega, 3)
    else:
        raise SystemExit("give either --omega or both --theta and --phi")
    if args.format == "json":
        print(json.dumps({"xi": value}))
    else:
        print(_fmt(value))
    return 0


def cmd_integral(args) -> int:
    if args.dim < 2:
        raise SystemExit("dimension must be at least 2")
    cfg = _config(args)
    method = "mc" if args.method == "mc" else "direct_quadrature"
    est = full_integral(args.dim, method, cfg)
    if args.format == "json":
        print(json.dumps({"value": est.value, "error": est.error,
                          "method": est.method,
                          "evaluations": est.evaluations}))
    else:
        print(f"{_fmt(est.value)} +- {_fmt(est.error)} ({est.method})")
    return 0


def cmd_report(args) -> int:
    if args.regions:
        print(regions_to_json())
        return 0
    cfg = _config(args)
    report = total_report(cfg, precision=args.precision,
                          include_oracle=True, jobs=args.jobs)
    report.match_tolerance = args.tolerance
    fmt = "json" if args.format == "text" else args.format
    _print_report(report, fmt, sys.stdout)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"verify": cmd_verify, "case": cmd_case, "xi": cmd_xi,
                "integral": cmd_integral, "report": cmd_report}
    try:
        return handlers[args.command](args)
    except SystemExit:
        raise
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
