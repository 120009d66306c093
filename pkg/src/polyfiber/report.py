"""Analysis pipelines shared by the CLI and the HTTP service.

Reports are pure functions of the input polynomial and options; the JSON
rendering is byte-identical across runs except for the timing field, which
is excluded from any hashing or comparison.
"""

from __future__ import annotations

import json
import time
from fractions import Fraction

from .laurent import LaurentPoly, ParseError, parse, poly_from_json, poly_to_json
from .polygon import polygon_report, newton_polygon, outer_edges, interior_lattice_points
from .branchcount import (
    ConstructibleFn,
    NonStabilized,
    NotConvenient,
    UnclassifiableEdge,
    classify_special_edge,
    edge_constructible,
    make_convenient,
    n_function,
    numeric_component_count,
)
from .polygon import UnsupportedRootField
from .eulercalc import euler_integral, sekalski_check, GradientZeroOnCircle
from .matecheck import no_mate_certifier, verify_pair, IdentityFails, CommonZeroUnproven
from .fixtures import builtin_pair, builtin_polynomial, builtin_raw
from . import hamtrace


class InputError(ValueError):
    """Bad user input: unparseable polynomial or unknown builtin."""


class PartialAnalysis(Exception):
    """Analysis could not be completed; carries the partial report."""

    def __init__(self, report: dict, reason: str):
        super().__init__(reason)
        self.report = report
        self.reason = reason


def resolve_polynomial(spec) -> tuple[LaurentPoly, str]:
    """Accept 'builtin:name', an expression string, or JSON term triples."""
    if isinstance(spec, str):
        if spec.startswith("builtin:"):
            name = spec.split(":", 1)[1]
            try:
                return builtin_polynomial(name), spec
            except KeyError as exc:
                raise InputError(str(exc)) from exc
        try:
            return parse(spec), spec
        except ParseError as exc:
            raise InputError(f"cannot parse polynomial: {exc}") from exc
    try:
        return poly_from_json(spec), "json-terms"
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad polynomial JSON: {exc}") from exc


def analyze(spec, probes=(), grid: int = 512, box=None, oracle: bool = False) -> dict:
    """Polygon, per-edge branch classification, N, Euler checks, and the
    no-mate verdict, end to end.  Raises PartialAnalysis (with the report
    built so far) when an edge is unclassifiable or the verdict is
    inconclusive."""
    t0 = time.perf_counter()
    p, shown = resolve_polynomial(spec)
    if not p or p.is_constant():
        raise InputError("constant polynomials have no fiber topology to analyze")
    report: dict = {
        "input": {"given": str(shown), "canonical": str(p), "terms": poly_to_json(p)},
    }
    partial_reason = None

    try:
        conv = make_convenient(p)
    except (NotConvenient, ValueError) as exc:
        raise InputError(f"cannot normalize to a convenient polygon: {exc}")
    work = conv.poly
    report["normalization"] = {
        "applied": not conv.is_identity(),
        "matrix": [list(row) for row in conv.matrix],
        "note": "shears preserve fiber components and level values",
    }
    padded = work if work.coeff(0, 0) else work + 1
    report["polygon"] = polygon_report(padded)

    edges = outer_edges(newton_polygon(padded))
    edge_rows = []
    n_total: ConstructibleFn | None = ConstructibleFn.constant(0)
    for edge in edges:
        row = {
            "endpoints": [list(edge.q1), list(edge.q2)],
            "normal": list(edge.normal),
            "lattice_count_bar": edge.lattice_count_bar,
        }
        try:
            fn = edge_constructible(work, edge)
            row["n_edge"] = fn.to_json()
            if len(interior_lattice_points(edge)) == 1:
                special = classify_special_edge(work, edge)
                row["special"] = _special_json(special)
            if n_total is not None:
                n_total = n_total + fn
        except (UnclassifiableEdge, UnsupportedRootField) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            n_total = None
            partial_reason = f"unclassifiable edge {row['endpoints']}"
        edge_rows.append(row)
    report["edges"] = edge_rows

    if n_total is not None:
        if probes:
            n_total = n_total.with_breakpoints([Fraction(str(q)) for q in probes])
        report["n_function"] = n_total.to_json()
        report["euler"] = {"integral_N_dchi": euler_integral(n_total)}
        try:
            sk = sekalski_check(p, n_total)
            report["euler"]["sekalski"] = sk
        except (GradientZeroOnCircle, ValueError, ArithmeticError) as exc:
            report["euler"]["sekalski"] = {"error": str(exc)}

        if oracle:
            checks = []
            probe_list = [Fraction(str(q)) for q in probes] if probes else _default_probes(n_total)
            for c in probe_list:
                entry = {"c": str(c), "n_function": n_total.evaluate(c)}
                try:
                    width = Fraction(str(box)) if box is not None else max(Fraction(5, 2), abs(c))
                    entry["oracle"] = numeric_component_count(p, c, box_halfwidth=width, grid=grid)
                    entry["match"] = entry["oracle"] == entry["n_function"]
                except NonStabilized as exc:
                    entry["oracle_error"] = str(exc)
                checks.append(entry)
            report["oracle"] = checks

    verdict = no_mate_certifier(p)
    report["certifier"] = verdict.to_json()
    if verdict.verdict == "Inconclusive" and partial_reason is None:
        partial_reason = "certifier inconclusive"

    # Builtins shipped with a certified mate also get the pair verification;
    # a verified mate is a conclusive outcome (the certifier's abstention is
    # exactly right for such p).
    if isinstance(spec, str) and spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if "q" in builtin_raw(name):
            report["pair_verification"] = verify_pair_report(spec)
            if report["pair_verification"].get("verified"):
                partial_reason = None

    report["timing_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    if partial_reason is not None:
        raise PartialAnalysis(report, partial_reason)
    return report


def _special_json(rep) -> dict:
    out = {
        "ns_type": rep.ns_type,
        "weight_B": rep.weight_B,
    }
    if rep.ns_type == "constant":
        out["constant_value"] = rep.constant_value
        return out
    out.update(
        {
            "c0": str(rep.c0),
            "series_order_m": rep.series_order_m,
            "leading_a_sign": rep.leading_a_sign,
            "b_value": rep.b_value,
            "left_value": rep.left_value,
            "right_value": rep.right_value,
            "sectors": [
                {
                    "name": s.name,
                    "v_side": s.v_side,
                    "chart": s.chart,
                    "chart_halfplane": s.chart_halfplane,
                    "p_minus_c0_sign": s.p_minus_c0_sign,
                    "witness": list(s.witness) if s.witness else None,
                    "witness_sign": s.witness_sign,
                }
                for s in rep.sector_info
            ],
        }
    )
    if rep.connecting_branch:
        out["connecting_branch"] = rep.connecting_branch
    return out


def _default_probes(n: ConstructibleFn) -> list[Fraction]:
    bps = list(n.breakpoints)
    if not bps:
        return [Fraction(0), Fraction(1)]
    probes = [bps[0] - 1]
    for b in bps:
        probes.append(b)
    for a, b in zip(bps, bps[1:]):
        probes.append((a + b) / 2)
    probes.append(bps[-1] + 1)
    return sorted(set(probes))


def verify_pair_report(spec) -> dict:
    """Verify a certified Jacobian pair: builtin:degree7 or a JSON payload
    {p, q, certificate}."""
    t0 = time.perf_counter()
    if isinstance(spec, str) and spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        try:
            p, q, cert = builtin_pair(name)
        except KeyError as exc:
            raise InputError(str(exc)) from exc
    elif isinstance(spec, dict):
        try:
            p = poly_from_json(spec["p"])
            q = poly_from_json(spec["q"])
            from .matecheck import MateCertificate

            cert = MateCertificate.from_json(spec["certificate"])
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"bad pair payload: {exc}") from exc
    else:
        raise InputError("expected builtin:NAME or a JSON object {p, q, certificate}")

    report = {
        "p": str(p),
        "deg_p": p.total_degree(),
        "deg_q": q.total_degree(),
        "sign": cert.sign,
        "weights": [str(w) for w in cert.weights],
    }
    try:
        verify_pair(p, q, cert)
        report["verified"] = True
    except IdentityFails as exc:
        report["verified"] = False
        report["residual"] = str(exc.residual)
    except CommonZeroUnproven as exc:
        report["verified"] = False
        report["common_zero_proof"] = str(exc)
    report["timing_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    return report


def trace_report(spec, levels, steps: int = 4000, tol: float = 1e-9) -> tuple[dict, str, str]:
    """Run the tracer; returns (summary, svg, csv)."""
    p, shown = resolve_polynomial(spec)
    breakpoints = ()
    try:
        conv = make_convenient(p)
        breakpoints = n_function(conv.poly).breakpoints
    except (NotConvenient, UnclassifiableEdge, UnsupportedRootField, ValueError):
        pass
    portrait = hamtrace.trace_portrait(p, levels, steps=steps, tol=tol, breakpoints=breakpoints)
    summary = {
        "input": str(shown),
        "levels": [str(l) for l in portrait.levels],
        "orbits": len(portrait.orbits),
        "max_drift": max((o.max_drift for o in portrait.orbits), default=0.0),
        "breakpoints": [str(b) for b in breakpoints],
    }
    return summary, portrait.svg, portrait.csv


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str)


def render_text(report: dict) -> str:
    if "input" not in report:
        return "\n".join(f"{k}: {v}" for k, v in report.items())
    lines = [f"polynomial: {report['input']['canonical']}"]
    norm = report.get("normalization", {})
    if norm.get("applied"):
        lines.append(f"normalized by shear {norm['matrix']}")
    poly = report.get("polygon", {})
    lines.append(f"polygon vertices: {poly.get('vertices')}  convenient={poly.get('convenient')}")
    for row in report.get("edges", []):
        desc = f"  edge {row['endpoints'][0]}->{row['endpoints'][1]} normal {tuple(row['normal'])} N_bar={row['lattice_count_bar']}"
        if "n_edge" in row:
            desc += f"  N_S: {row['n_edge']['type']}"
        if "special" in row and row["special"].get("ns_type") != "constant":
            sp = row["special"]
            desc += f"  [special: {sp['ns_type']} at c0={sp['c0']}, B={sp['weight_B']}, m={sp['series_order_m']}]"
        if "error" in row:
            desc += f"  ERROR {row['error']}"
        lines.append(desc)
    if "n_function" in report:
        lines.append(f"N type: {report['n_function']['type']}")
        lines.append(f"integral N dchi = {report['euler']['integral_N_dchi']}")
        sk = report["euler"].get("sekalski", {})
        if "ok" in sk:
            lines.append(f"Sekalski: deg_inf grad p = {sk['lhs']} vs 1 + integral = {sk['rhs']}  ok={sk['ok']}")
    for entry in report.get("oracle", []):
        lines.append(
            f"  oracle c={entry['c']}: N={entry['n_function']} count={entry.get('oracle', '?')} match={entry.get('match')}"
        )
    cert = report.get("certifier", {})
    lines.append(f"verdict: {cert.get('verdict')} (rule: {cert.get('rule')})")
    lines.append(f"timing: {report.get('timing_ms')} ms")
    return "\n".join(lines)
