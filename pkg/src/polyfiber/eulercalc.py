"""Euler integration of constructible functions and the gradient degree at
infinity, tied together by Sekalski's identity deg = 1 + integral(N) dchi.

The winding number of grad p around a circle is computed exactly: the circle
is parameterized rationally (tan-half-angle, two antipodal arcs), gradient
components become integer-coefficient polynomials in the parameter after
clearing denominators, and signed crossings of the positive x-direction are
counted with Sturm isolation.  No floating arctangents anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly, partial
from . import univariate as uv
from .univariate import UPoly
from .branchcount import ConstructibleFn, make_convenient, n_function
from . import resultants as rs


class GradientZeroOnCircle(ArithmeticError):
    """grad p vanished on every sampled circle despite radius perturbation."""


class NonStabilizedDegree(ArithmeticError):
    def __init__(self, windings):
        super().__init__(f"winding numbers did not stabilize: {windings}")
        self.windings = windings


def euler_integral(f: ConstructibleFn) -> int:
    """Integral of f against the Euler characteristic: points count +1,
    open intervals count -1 (chi(R) = chi(open interval) = -1)."""
    return sum(f.point_values) - sum(f.interval_values)


@dataclass(frozen=True)
class DegreeAtInfinityReport:
    degree: int
    radii_used: tuple[Fraction, ...]
    samples_per_circle: int
    stabilized: bool

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "radii": [str(r) for r in self.radii_used],
            "samples_per_circle": self.samples_per_circle,
            "stabilized": self.stabilized,
        }


def _circle_poly(p: LaurentPoly, r: Fraction, antipodal: bool, rot: Fraction) -> UPoly:
    """p evaluated on the rational circle arc of radius r, rotated by the
    rational angle with tan(theta/2) = rot, cleared of denominators.

    Base arc: x0 = (1-t^2)/(1+t^2), y0 = 2t/(1+t^2) for t in [-1, 1]; the
    rotation moves the chart seams so degenerate seam hits can be dodged."""
    if not p:
        return []
    d = p.total_degree()
    den = 1 + rot * rot
    cos_r, sin_r = (1 - rot * rot) / den, 2 * rot / den
    one_minus = uv.upoly([1, 0, -1])   # 1 - t^2
    two_t = uv.upoly([0, 2])           # 2t
    one_plus = uv.upoly([1, 0, 1])     # 1 + t^2
    x_num = uv.uadd(uv.uscale(one_minus, cos_r), uv.uscale(two_t, -sin_r))
    y_num = uv.uadd(uv.uscale(one_minus, sin_r), uv.uscale(two_t, cos_r))
    pw_x = _pows(x_num, d)
    pw_y = _pows(y_num, d)
    pw_plus = _pows(one_plus, d)
    total: UPoly = []
    for (i, j), c in p.items():
        sign = Fraction(-1) ** ((i + j) % 2) if antipodal else Fraction(1)
        term = uv.uscale(uv.umul(uv.umul(pw_x[i], pw_y[j]), pw_plus[d - i - j]), c * sign * r ** (i + j))
        total = uv.uadd(total, term)
    return total


def _pows(base: UPoly, n: int) -> list[UPoly]:
    out = [uv.upoly([1])]
    for _ in range(n):
        out.append(uv.umul(out[-1], base))
    return out


def _winding_on_circle(px: LaurentPoly, py: LaurentPoly, r: Fraction, rot: Fraction) -> tuple[int, int] | None:
    """Exact winding number of (p_x, p_y) along the circle of radius r, and
    the number of positive-x-axis crossing events; None if the gradient
    vanishes on the circle (or points along +x exactly at a chart seam)."""
    winding = 0
    events = 0
    for antipodal in (False, True):
        pt = _circle_poly(px, r, antipodal, rot)
        qt = _circle_poly(py, r, antipodal, rot)
        if uv.is_zero(pt) and uv.is_zero(qt):
            return None
        if uv.is_zero(qt):
            if uv.count_real_roots(pt, Fraction(-1), Fraction(1)) > 0:
                return None  # (P, 0) with P vanishing: zero gradient
            continue  # horizontal field never crosses +x transversally
        if uv.is_zero(pt):
            if uv.count_real_roots(qt, Fraction(-1), Fraction(1)) > 0:
                return None
            continue
        g = uv.ugcd(pt, qt)
        if uv.degree(g) >= 1 and uv.count_real_roots(g, Fraction(-1), Fraction(1)) > 0:
            return None  # common zero: the gradient vanishes on this circle
        for seam in (Fraction(-1), Fraction(1)):
            if uv.ueval(qt, seam) == 0 and uv.ueval(pt, seam) > 0:
                return None  # crossing exactly at the seam: perturb the radius
        w_ev = _axis_crossings(pt, qt)
        if w_ev is None:
            return None
        winding += w_ev[0]
        events += w_ev[1]
    return winding, events


def _axis_crossings(pt: UPoly, qt: UPoly) -> tuple[int, int] | None:
    """Signed crossings of the positive x-direction for t in (-1, 1):
    roots of qt where pt > 0, signed by the direction qt changes sign."""
    winding = 0
    events = 0
    sf = uv.squarefree_part(qt)
    rational = [val for val, _ in uv.rational_roots(sf) if -1 < val < 1]
    for val in rational:
        if uv.ueval(pt, val) <= 0:
            continue
        # Multiplicity of val in qt decides whether the sign changes.
        mu = 0
        rest = list(qt)
        while True:
            quot, rem = uv.udivmod(rest, uv.upoly([-val, 1]))
            if rem:
                break
            mu += 1
            rest = quot
        if mu % 2 == 0:
            continue
        direction = 1 if uv.ueval(rest, val) > 0 else -1
        winding += direction
        events += 1
    deflated = list(sf)
    for val in rational:
        deflated = uv.udiv_exact(deflated, uv.upoly([-val, 1]))
    if uv.degree(deflated) < 1:
        return winding, events
    for iv in uv.isolate_real_roots(deflated):
        if iv.hi <= -1 or iv.lo >= 1:
            continue
        interval = uv.Interval(max(iv.lo, Fraction(-1)), min(iv.hi, Fraction(1)))
        # Refine until the interval contains no rational qt-root and no pt-root,
        # so the endpoint signs of qt and pt are decisive.
        for _ in range(256):
            clean = all(not (interval.lo < v <= interval.hi) for v in rational)
            if clean and uv.count_real_roots(pt, interval.lo, interval.hi) == 0:
                break
            interval = uv.refine_interval(deflated, interval, interval.width() / 4)
        else:
            return None
        if uv.ueval(pt, interval.lo) <= 0:
            continue
        q_lo, q_hi = uv.ueval(qt, interval.lo), uv.ueval(qt, interval.hi)
        assert q_lo != 0 and q_hi != 0
        if q_lo < 0 < q_hi:
            winding += 1
            events += 1
        elif q_hi < 0 < q_lo:
            winding -= 1
            events += 1
    return winding, events


def degree_at_infinity(p: LaurentPoly, initial_radius=Fraction(1)) -> DegreeAtInfinityReport:
    """Topological degree of a -> grad p(a)/|grad p(a)| on large circles,
    doubling the radius until the winding number repeats twice."""
    px, py = partial(p, "x"), partial(p, "y")
    if not px and not py:
        raise ValueError("gradient vanishes identically")
    r = Fraction(initial_radius)
    windings: list[int] = []
    radii: list[Fraction] = []
    events = 0
    for _ in range(24):
        attempt = r
        result = None
        for retry in range(8):
            # Dodge seam degeneracies by rotating the charts, then by
            # nudging the radius.
            for rot in (Fraction(0), Fraction(1, 7), Fraction(1, 3)):
                result = _winding_on_circle(px, py, attempt, rot)
                if result is not None:
                    break
            if result is not None:
                break
            attempt = attempt * (1 + Fraction(1, 7 + retry))
        if result is None:
            raise GradientZeroOnCircle(f"gradient vanished near every radius around {r}")
        w, ev = result
        windings.append(w)
        radii.append(attempt)
        events = max(events, ev)
        if len(windings) >= 3 and windings[-1] == windings[-2] == windings[-3]:
            return DegreeAtInfinityReport(w, tuple(radii), events, True)
        r *= 2
    raise NonStabilizedDegree(windings)


def sekalski_check(p: LaurentPoly, n: ConstructibleFn) -> dict:
    """Verify deg_infinity(grad p) == 1 + integral(N) dchi, both sides exact.

    The finiteness of the critical set is checked via the resultants of the
    gradient components (a nonzero resultant in some direction suffices).
    """
    px, py = partial(p, "x"), partial(p, "y")
    finite = False
    for main in ("y", "x"):
        try:
            res = rs.resultant(px, py, eliminate=main)
        except ValueError:
            continue
        if not uv.is_zero(res):
            finite = True
            break
    if not finite:
        raise ValueError("p_x and p_y share a component: infinitely many critical points")
    report = degree_at_infinity(p)
    lhs = report.degree
    rhs = 1 + euler_integral(n)
    return {"lhs": lhs, "rhs": rhs, "ok": lhs == rhs, "degree_report": report.to_json()}


def submersion_euler_check(p: LaurentPoly, caller_certified: bool = False) -> bool:
    """True iff integral(N) dchi == -1 for the (certified) submersion p."""
    if not caller_certified:
        cert = rs.certify_submersion(p)
        if cert.status != "certified":
            raise ValueError(f"not certified a submersion: {cert.reason}")
    conv = make_convenient(p)
    return euler_integral(n_function(conv.poly)) == -1
