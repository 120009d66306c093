import math
from fractions import Fraction

from polyfiber.laurent import exact_divide, parse
from polyfiber.hamtrace import compactify, hamiltonian_field, trace_portrait


class TestField:
    def test_linear(self):
        f = hamiltonian_field(parse("x"))
        assert f == (parse("0"), parse("1"))

    def test_circle(self):
        f = hamiltonian_field(parse("x^2+y^2"))
        assert f == (parse("-2*y"), parse("2*x"))

    def test_degree7_component_degree(self, degree7_p):
        fx, fy = hamiltonian_field(degree7_p)
        assert max(fx.total_degree(), fy.total_degree()) == 6


class TestCompactify:
    def test_equator_invariance_symbolic(self):
        # In the U1/U2 charts the v-component must be divisible by v exactly.
        y_mono = parse("y")
        for p in (parse("y"), parse("x^2-y^2"), parse("x*(1+x*y)")):
            charts = compactify(hamiltonian_field(p))
            for cf in charts:
                if cf.chart in ("U1", "U2") and cf.dv:
                    exact_divide(cf.dv, y_mono)  # raises if not divisible

    def test_constant_field_chart(self):
        # p = y gives the field (-1, 0); its U1 chart keeps v = 0 invariant.
        charts = {c.chart: c for c in compactify((parse("-1"), parse("0")))}
        u1 = charts["U1"]
        assert all(j >= 1 for (_, j) in u1.dv.support()) or not u1.dv

    def test_finite_chart_is_field_itself(self):
        fld = hamiltonian_field(parse("x^2+y^2"))
        charts = {c.chart: c for c in compactify(fld)}
        assert (charts["U3"].du, charts["U3"].dv) == fld

    def test_saddle_equator_equilibria(self):
        # Linear saddle field (x, -y): equator equilibria on the axes means
        # the U1-chart du vanishes at (u, v) = (0, 0).
        charts = {c.chart: c for c in compactify((parse("x"), parse("-y")))}
        assert charts["U1"].du.evaluate(0, 0) == 0
        assert charts["U2"].du.evaluate(0, 0) == 0


class TestPortrait:
    def test_circle_closed_orbit_conservation(self):
        portrait = trace_portrait(parse("x^2+y^2"), [Fraction(1)], steps=3000, tol=1e-9)
        assert portrait.orbits
        orbit = max(portrait.orbits, key=lambda o: len(o.points))
        assert orbit.max_drift <= 1e-9
        assert "closed" in orbit.flags
        radii = [math.hypot(x, y) for x, y in orbit.points]
        assert all(abs(r - 1.0) < 1e-6 for r in radii)

    def test_broughton_pattern(self, broughton):
        portrait = trace_portrait(broughton, [Fraction(-1), Fraction(0), Fraction(1)], steps=1500)
        assert len(portrait.orbits) >= 3
        for orbit in portrait.orbits:
            assert orbit.max_drift <= 1e-6

    def test_svg_and_csv(self):
        portrait = trace_portrait(parse("x^2+y^2"), [Fraction(1), Fraction(2)], steps=800)
        assert "<svg" in portrait.svg and "polyline" in portrait.svg
        header = portrait.csv.splitlines()[0]
        assert header == "orbit,chart,t,u,v"
        assert len(portrait.csv.splitlines()) > 10

    def test_degree7_zero_level_disconnected(self, degree7_p):
        portrait = trace_portrait(degree7_p, [Fraction(0)], steps=1200)
        # At least two orbits on the zero fiber (it has >= 2 components).
        assert len(portrait.orbits) >= 2

    def test_chart_coherence(self):
        """An orbit traced in the plane, re-expressed in the U1 chart, stays
        on the same fiber: |p - c| within 10x the tracing tolerance, and the
        chart-field retrace stays near the transformed orbit."""
        p = parse("x^2+y^2")
        tol = 1e-9
        portrait = trace_portrait(p, [Fraction(4)], steps=2000, tol=tol)
        orbit = max(portrait.orbits, key=lambda o: len(o.points))
        chart_pts = [(y / x, 1 / x) for x, y in orbit.points if x > 0.5]
        assert chart_pts
        # Transform back and check fiber membership within 10*tol.
        for u, v in chart_pts:
            x, y = 1 / v, u / v
            assert abs(p.eval_float(x, y) - 4.0) <= 10 * tol
        # Retrace in the U1 chart field from the transformed start point and
        # verify it stays on the transformed fiber too.
        charts = {c.chart: c for c in compactify(hamiltonian_field(p))}
        cf = charts["U1"]
        u, v = chart_pts[0]
        h = 2e-4
        for _ in range(400):
            du = cf.du.eval_float(u, v)
            dv = cf.dv.eval_float(u, v)
            norm = math.hypot(du, dv) or 1.0
            u += h * du / norm
            v += h * dv / norm
            x, y = 1 / v, u / v
            assert abs(p.eval_float(x, y) - 4.0) <= 1e-3
