"""The numeric fiber-component oracle: paper values and protocol behavior."""

from fractions import Fraction

import pytest

from polyfiber.laurent import parse
from polyfiber.branchcount import NonStabilized, numeric_component_count


class TestPaperValues:
    def test_broughton_zero_fiber(self, broughton):
        assert numeric_component_count(broughton, 0, grid=256) == 3

    def test_broughton_generic_fiber(self, broughton):
        assert numeric_component_count(broughton, Fraction(1, 2), grid=256) == 2
        assert numeric_component_count(broughton, -1, grid=256) == 2

    def test_empty_fiber(self):
        assert numeric_component_count(parse("x^2+y^2"), -1, grid=256) == 0

    def test_degree7_zero_fiber_disconnected(self, degree7_p):
        assert numeric_component_count(degree7_p, 0, grid=256) >= 2


class TestProtocol:
    def test_grid_minimum(self, broughton):
        with pytest.raises(ValueError):
            numeric_component_count(broughton, 0, grid=32)

    def test_non_stabilized_reports_trace(self, broughton):
        with pytest.raises(NonStabilized) as err:
            numeric_component_count(broughton, 0, grid=256, max_doublings=0)
        assert err.value.counts  # the scale trace is attached

    def test_window_semantics(self):
        # The line x + y = 7 misses the default window but meets a larger one.
        p = parse("x+y")
        assert numeric_component_count(p, 7, box_halfwidth=Fraction(5, 2), grid=128) == 0
        assert numeric_component_count(p, 7, box_halfwidth=Fraction(4), grid=128) == 1

    def test_curve_through_grid_corners(self):
        # The fiber x = 0 runs exactly along a grid line; the sign(0) = +1
        # convention still chains it into one component.
        assert numeric_component_count(parse("x"), 0, grid=128) == 1
