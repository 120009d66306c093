import math
from fractions import Fraction

import pytest

from polyfiber.laurent import parse
from polyfiber.branchcount import ConstructibleFn, make_convenient, n_function
from polyfiber.eulercalc import (
    degree_at_infinity,
    euler_integral,
    sekalski_check,
    submersion_euler_check,
)


class TestEulerIntegral:
    def test_constant_one(self):
        assert euler_integral(ConstructibleFn.constant(1)) == -1

    def test_broughton_type(self):
        n = ConstructibleFn((Fraction(1),), (2, 2), (3,))
        assert euler_integral(n) == 2 * (-1) + 3 * (+1) + 2 * (-1)

    def test_constant_zero(self):
        assert euler_integral(ConstructibleFn.constant(0)) == 0

    def test_additivity(self):
        f = ConstructibleFn((Fraction(0), Fraction(2)), (1, 0, 3), (2, 1))
        g = ConstructibleFn((Fraction(1),), (4, 5), (6,))
        assert euler_integral(f + g) == euler_integral(f) + euler_integral(g)


def float_winding(p, r, samples=4000):
    """Independent float oracle: summed angle increments of grad p."""
    from polyfiber.laurent import partial

    px, py = partial(p, "x"), partial(p, "y")
    total = 0.0
    prev = None
    for k in range(samples + 1):
        th = 2 * math.pi * k / samples
        x, y = r * math.cos(th), r * math.sin(th)
        ang = math.atan2(py.eval_float(x, y), px.eval_float(x, y))
        if prev is not None:
            d = ang - prev
            while d > math.pi:
                d -= 2 * math.pi
            while d < -math.pi:
                d += 2 * math.pi
            total += d
        prev = ang
    return round(total / (2 * math.pi))


class TestDegreeAtInfinity:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("x^2+y^2", 1),     # nondegenerate minimum
            ("x^2-y^2", -1),    # saddle
            ("x*(1+x*y)", 0),   # submersion
            ("x*y", -1),
            ("x*y*(x+y)", -2),  # product of three distinct linear forms
        ],
    )
    def test_degrees(self, text, expected):
        p = parse(text)
        rep = degree_at_infinity(p)
        assert rep.degree == expected
        assert rep.stabilized and len(rep.radii_used) >= 3
        # Independent float cross-check on one large circle.
        assert float_winding(p, 13.37) == expected


class TestSekalski:
    @pytest.mark.parametrize(
        "text,deg,integral",
        [("x^2+y^2", 1, 0), ("x^2-y^2", -1, -2), ("x*(1+x*y)", 0, -1)],
    )
    def test_identity(self, text, deg, integral):
        p = parse(text)
        n = n_function(make_convenient(p).poly)
        rep = sekalski_check(p, n)
        assert rep["ok"] and rep["lhs"] == deg
        assert euler_integral(n) == integral

    def test_rejects_nonisolated_critical_set(self):
        with pytest.raises(ValueError):
            sekalski_check(parse("(x+y)^2"), ConstructibleFn.constant(0))


class TestSubmersionEulerCheck:
    def test_fixtures(self, broughton, broughton_shifted):
        assert submersion_euler_check(broughton_shifted)
        assert submersion_euler_check(parse("x+y"))
        assert submersion_euler_check(broughton)

    def test_degree7(self, degree7_p):
        assert submersion_euler_check(degree7_p, caller_certified=True)

    def test_type_sum_identity(self, broughton_shifted, degree7_p, newone6):
        # For submersion N of type m1 **m2** ... : sum of interval values
        # equals 1 + sum of point values.
        for p in (broughton_shifted, degree7_p, newone6):
            n = n_function(p)
            assert sum(n.interval_values) == 1 + sum(n.point_values)

    def test_rejects_non_submersion(self):
        with pytest.raises(ValueError):
            submersion_euler_check(parse("x^2+y^2"))
