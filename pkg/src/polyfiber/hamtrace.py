"""Numeric tracing of the Hamiltonian foliation grad(p)-perp on the Poincare
disc, for manual inspection of phase portraits.

The chart fields of the compactification are exact polynomials (the equator
invariance is a symbolic fact, asserted at construction); the orbit tracing
itself is plain double-precision RK4 with a projection step back onto the
level set after every step, so Hamiltonian conservation is a monitored
contract rather than a hope.  Portraits are inspection aids, not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .laurent import LaurentPoly, partial, exact_divide


def hamiltonian_field(p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """grad(p)-perp = (-p_y, p_x); orbits run along fibers of p."""
    if not p.is_ordinary():
        raise ValueError("hamiltonian_field requires an ordinary polynomial")
    return (-partial(p, "y"), partial(p, "x"))


@dataclass(frozen=True)
class ChartField:
    """Compactified field in one Poincare chart, already polynomial after
    the x3^(m-1) rescaling.  Charts: U1 ~ x-direction with (u, v) = (y/x, 1/x),
    U2 ~ y-direction with (u, v) = (x/y, 1/y), U3 the finite plane."""

    chart: str
    du: LaurentPoly
    dv: LaurentPoly


def _chart_image(f: LaurentPoly, m: int, which: str) -> LaurentPoly:
    """v^m * f at the chart substitution; exponent bookkeeping only."""
    terms = {}
    for (i, j), c in f.items():
        if which == "x":   # x = 1/v, y = u/v
            e = (j, m - i - j)
        else:              # x = u/v, y = 1/v
            e = (i, m - i - j)
        terms[e] = terms.get(e, 0) + c
    return LaurentPoly(terms)


def compactify(fld: tuple[LaurentPoly, LaurentPoly]) -> list[ChartField]:
    """The three chart fields of the Poincare compactification."""
    P, Q = fld
    if not P and not Q:
        raise ValueError("zero vector field")
    m = max(f.total_degree() for f in (P, Q) if f)
    ap = _chart_image(P, m, "x")
    aq = _chart_image(Q, m, "x")
    u = LaurentPoly.monomial(1, 0)
    v = LaurentPoly.monomial(0, 1)
    u1 = ChartField("U1", aq - u * ap, -(v * ap))
    bp = _chart_image(P, m, "y")
    bq = _chart_image(Q, m, "y")
    u2 = ChartField("U2", bp - u * bq, -(v * bq))
    u3 = ChartField("U3", P, Q)
    for cf in (u1, u2):
        if cf.dv:
            # Equator invariance: v must divide the v-component exactly.
            exact_divide(cf.dv, v)
    return [u1, u2, u3]


@dataclass
class Orbit:
    """A traced orbit: polyline in both plane and disc coordinates."""

    orbit_id: int
    level: Fraction
    points: list[tuple[float, float]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    max_drift: float = 0.0

    def disc_points(self) -> list[tuple[float, float]]:
        out = []
        for x, y in self.points:
            s = 1.0 / math.sqrt(1.0 + x * x + y * y)
            out.append((x * s, y * s))
        return out


class StepCollapse(RuntimeError):
    """Step size collapsed near an equilibrium; the orbit was truncated."""


def _seeds_for_level(p: LaurentPoly, c: float, box: float, lines: int = 21, max_seeds: int = 10):
    """Sign-change scan along horizontal lines, refined by bisection."""
    seeds = []
    for k in range(lines):
        y = -box + 2 * box * k / (lines - 1)
        prev_x = -box
        prev_val = p.eval_float(prev_x, y) - c
        steps = 160
        for i in range(1, steps + 1):
            x = -box + 2 * box * i / steps
            val = p.eval_float(x, y) - c
            if prev_val == 0.0:
                seeds.append((prev_x, y))
            elif val * prev_val < 0:
                a, b, fa = prev_x, x, prev_val
                for _ in range(60):
                    mid = 0.5 * (a + b)
                    fm = p.eval_float(mid, y) - c
                    if fm == 0.0:
                        a = b = mid
                        break
                    if fa * fm < 0:
                        b = mid
                    else:
                        a, fa = mid, fm
                seeds.append((0.5 * (a + b), y))
            prev_x, prev_val = x, val
            if len(seeds) >= max_seeds * 3:
                break
    # Thin out seeds that are too close together.
    picked = []
    for s in seeds:
        if all((s[0] - t[0]) ** 2 + (s[1] - t[1]) ** 2 > 0.25 for t in picked):
            picked.append(s)
        if len(picked) >= max_seeds:
            break
    return picked


def _trace_one(p, px, py, seed, c: float, steps: int, tol: float, escape: float, h0: float):
    pts = [seed]
    flags = []
    max_drift = 0.0
    x, y = seed
    start = seed
    h = h0
    closed = False
    for direction in (1.0, -1.0):
        x, y = start
        local = []
        for n in range(steps):
            def f(xx, yy):
                return (-py.eval_float(xx, yy) * direction, px.eval_float(xx, yy) * direction)

            k1 = f(x, y)
            speed = math.hypot(*k1)
            if speed < 1e-12:
                flags.append("step_collapse")
                break
            hh = h / speed
            k2 = f(x + 0.5 * hh * k1[0], y + 0.5 * hh * k1[1])
            k3 = f(x + 0.5 * hh * k2[0], y + 0.5 * hh * k2[1])
            k4 = f(x + hh * k3[0], y + hh * k3[1])
            x += hh * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6.0
            y += hh * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6.0
            # Project back onto the level set: one Newton step along grad p.
            for _ in range(2):
                val = p.eval_float(x, y) - c
                gx, gy = px.eval_float(x, y), py.eval_float(x, y)
                g2 = gx * gx + gy * gy
                if g2 < 1e-18:
                    break
                x -= val * gx / g2
                y -= val * gy / g2
            drift = abs(p.eval_float(x, y) - c)
            max_drift = max(max_drift, drift)
            if drift > tol * 1e3:
                flags.append("drift_exceeded")
                break
            local.append((x, y))
            if x * x + y * y > escape * escape:
                break
            if n > 24 and (x - start[0]) ** 2 + (y - start[1]) ** 2 < (1.5 * h) ** 2:
                closed = True
                break
        if direction > 0:
            pts = pts + local
        else:
            pts = list(reversed(local)) + pts
        if closed:
            break
    return pts, flags, max_drift, closed


@dataclass
class Portrait:
    orbits: list[Orbit]
    levels: list[Fraction]
    svg: str
    csv: str


def trace_portrait(
    p: LaurentPoly,
    levels,
    steps: int = 4000,
    tol: float = 1e-9,
    box: float = 8.0,
    breakpoints=(),
    annotations=(),
) -> Portrait:
    """Trace the Hamiltonian foliation at the given levels and render the
    Poincare-disc portrait (SVG) plus the orbit table (CSV)."""
    px, py = partial(p, "x"), partial(p, "y")
    orbits: list[Orbit] = []
    oid = 0
    levels = [Fraction(c) for c in levels]
    for level in levels:
        c = float(level)
        for seed in _seeds_for_level(p, c, box):
            pts, flags, drift, closed = _trace_one(p, px, py, seed, c, steps, tol, escape=60.0, h0=0.02)
            if len(pts) < 8:
                continue
            orbit = Orbit(orbit_id=oid, level=level, points=pts, flags=flags + (["closed"] if closed else []))
            orbit.max_drift = drift
            orbits.append(orbit)
            oid += 1
    svg = _render_svg(orbits, levels, [Fraction(b) for b in breakpoints], annotations)
    csv = _render_csv(orbits)
    return Portrait(orbits=orbits, levels=levels, svg=svg, csv=csv)


def _level_color(level: Fraction, breakpoints: list[Fraction]) -> str:
    # Convention: values below the first breakpoint in red, breakpoints black.
    if not breakpoints:
        return "#1f77b4"
    lo = min(breakpoints)
    if level in breakpoints:
        return "#000000"
    if level < lo:
        return "#d62728"
    return "#1f77b4"


def _render_svg(orbits: list[Orbit], levels, breakpoints, annotations) -> str:
    size = 640
    r = size / 2 - 8
    cx = cy = size / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="#444" stroke-width="1.5"/>',
    ]
    for orbit in orbits:
        color = _level_color(orbit.level, breakpoints)
        coords = " ".join(
            f"{cx + r * u:.2f},{cy - r * v:.2f}" for u, v in orbit.disc_points()
        )
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.1" opacity="0.9"/>'
        )
    for note in annotations:
        parts.append(
            f'<text x="{cx + r * float(note.get("u", 0)):.1f}" y="{cy - r * float(note.get("v", 0)):.1f}" '
            f'font-size="12" fill="#333">{note.get("text", "")}</text>'
        )
    legend = ", ".join(str(l) for l in levels)
    parts.append(f'<text x="10" y="{size - 10}" font-size="12" fill="#333">levels: {legend}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def _render_csv(orbits: list[Orbit]) -> str:
    rows = ["orbit,chart,t,u,v"]
    for orbit in orbits:
        for t, (u, v) in enumerate(orbit.points):
            rows.append(f"{orbit.orbit_id},U3,{t},{u:.9g},{v:.9g}")
    return "\n".join(rows) + "\n"
