"""Command-line front end: analyze / verify-pair / trace.

Thin client over the same report layer the HTTP service uses.  Exit codes:
0 success, 1 input or verification error, 2 inconclusive or unclassifiable
(with a partial report printed).  POLYFIBER_SEED fixes any randomized spot
checks (the core analyses are fully deterministic without it).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .report import (
    InputError,
    PartialAnalysis,
    analyze,
    render_json,
    render_text,
    trace_report,
    verify_pair_report,
)


def _write_out(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        print(text)


def _emit(report: dict, args) -> None:
    _write_out(render_json(report) if args.json else render_text(report), args.out)


def cmd_analyze(args) -> int:
    probes = [Fraction(tok) for tok in args.probes.split(",")] if args.probes else []
    try:
        report = analyze(
            args.polynomial,
            probes=probes,
            grid=args.grid,
            box=Fraction(args.box) if args.box else None,
            oracle=args.oracle,
        )
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PartialAnalysis as exc:
        _emit(exc.report, args)
        print(f"inconclusive: {exc.reason}", file=sys.stderr)
        return 2
    _emit(report, args)
    return 0


def cmd_verify_pair(args) -> int:
    spec = args.pair
    if not spec.startswith("builtin:"):
        try:
            with open(spec) as fh:
                spec = json.load(fh)
        except OSError as exc:
            print(f"error: cannot read pair file: {exc}", file=sys.stderr)
            return 1
        except json.JSONDecodeError as exc:
            print(f"error: bad JSON in pair file: {exc}", file=sys.stderr)
            return 1
    try:
        report = verify_pair_report(spec)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report, args)
    if not report.get("verified"):
        print("verification FAILED", file=sys.stderr)
        return 1
    return 0


def cmd_trace(args) -> int:
    levels = [Fraction(tok) for tok in args.levels.split(",")]
    try:
        summary, svg, csv = trace_report(args.polynomial, levels, steps=args.steps, tol=args.tol)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = args.out or "portrait.svg"
    with open(out, "w") as fh:
        fh.write(svg)
    csv_path = args.csv or (out.rsplit(".", 1)[0] + ".csv")
    with open(csv_path, "w") as fh:
        fh.write(csv)
    summary["svg"] = out
    summary["csv"] = csv_path
    print(render_json(summary) if args.json else "\n".join(f"{k}: {v}" for k, v in summary.items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfiber",
        description="Exact fiber topology of real bivariate polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="polygon, branch counts, Euler checks, no-mate verdict")
    pa.add_argument("polynomial", help="expression in x,y or builtin:NAME")
    pa.add_argument("--json", action="store_true", help="JSON output")
    pa.add_argument("--probes", help="comma-separated rational probe values")
    pa.add_argument("--grid", type=int, default=512, help="oracle grid resolution")
    pa.add_argument("--box", help="oracle box halfwidth (rational)")
    pa.add_argument("--oracle", action="store_true", help="cross-check N against the numeric oracle")
    pa.add_argument("--out", help="write the report to a file")
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify-pair", help="verify a certified Jacobian pair")
    pv.add_argument("pair", help="builtin:degree7 or a JSON file {p, q, certificate}")
    pv.add_argument("--json", action="store_true")
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_verify_pair)

    pt = sub.add_parser("trace", help="trace the Hamiltonian foliation to an SVG portrait")
    pt.add_argument("polynomial", help="expression in x,y or builtin:NAME")
    pt.add_argument("--levels", required=True, help="comma-separated level values")
    pt.add_argument("--steps", type=int, default=4000)
    pt.add_argument("--tol", type=float, default=1e-9)
    pt.add_argument("--out", help="output SVG path (default portrait.svg)")
    pt.add_argument("--csv", help="output CSV path")
    pt.add_argument("--json", action="store_true")
    pt.set_defaults(func=cmd_trace)
    return parser


def main(argv=None) -> int:
    seed = os.environ.get("POLYFIBER_SEED")
    if seed is not None:
        random.seed(int(seed))
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
