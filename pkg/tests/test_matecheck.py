import random
from fractions import Fraction

import pytest
import sympy

from polyfiber.laurent import LaurentPoly, jacobian_det, parse
from polyfiber.matecheck import (
    CommonZeroUnproven,
    IdentityFails,
    MateCertificate,
    build_degree7,
    no_mate_certifier,
    verify_bezout,
    verify_pair,
)
from polyfiber.branchcount import n_function, numeric_component_count, make_convenient
from polyfiber.resultants import certify_submersion


@pytest.fixture(scope="module")
def ex():
    return build_degree7()


def to_sympy(p: LaurentPoly):
    x, y = sympy.symbols("x y")
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * x**i * y**j for (i, j), c in p.items()))


class TestDegree7Construction:
    def test_sympy_cross_check(self, ex):
        """Independent expansion of every built-in polynomial via sympy."""
        x, y = sympy.symbols("x y")
        m = 1 + x + x**2 * y
        p = m * (1 + y + 2 * x * y + x**2 * y**2)
        w = (1 + x * y) * m
        assert sympy.expand(p - to_sympy(ex.p)) == 0
        assert sympy.expand(w - to_sympy(ex.w)) == 0
        q_bracket = (
            2 * (12 + 31 * w) * p**3
            + (-6 - 68 * w + 5 * w**2 + 22 * w**3) * p**2
            + 2 * (7 + 11 * w - 28 * w**2 + 17 * w**3 + w**4) * w * p
            - (7 - 14 * w + 7 * w**2 + 11 * w**4 - 10 * w**5) * w**2
        )
        assert sympy.simplify(q_bracket - to_sympy(ex.q) * m**2) == 0
        m1_num = -p + 5 * p**2 - 6 * p * w**2 + 4 * w**3 - 3 * w**4
        assert sympy.simplify(m1_num - to_sympy(ex.m1) * m) == 0
        assert sympy.expand(p * (w**2 - p) - to_sympy(ex.m2)) == 0

    def test_degree_seven(self, ex):
        assert ex.p.total_degree() == 7

    def test_p_equals_m_times_cofactor(self, ex):
        assert not (ex.p - ex.m * parse("1+y+2*x*y+x^2*y^2"))

    def test_jacobian_identities(self, ex):
        assert jacobian_det(ex.p, ex.w) == -(ex.m * ex.p)
        # Cleared-denominator form of J(p, 1/m^2) = 2(2w-1)/m^2.
        assert jacobian_det(ex.p, ex.m) == -(ex.m * (2 * ex.w - 1))

    def test_sos_identity_is_exactly_zero(self, ex):
        residual = jacobian_det(ex.p, ex.q) + 2 * ex.m1 ** 2 + 12 * ex.m2 ** 2
        assert not residual  # empty term map, not numerically small

    def test_bezout_identity(self, ex):
        ok, res = verify_bezout(
            ((4 * ex.r, ex.p - ex.w ** 2), (ex.s, 2 * ex.w - 1)), LaurentPoly.const(1)
        )
        assert ok and not res

    def test_zero_fiber_disconnected(self, ex):
        assert numeric_component_count(ex.p, 0, grid=256) >= 2


class TestVerifyPair:
    def test_degree7_certificate(self, ex):
        assert verify_pair(ex.p, ex.q, ex.certificate)

    def test_identity_pair(self):
        cert = MateCertificate(1, (Fraction(1),), (parse("1"),), ((parse("1"), parse("1")),))
        assert verify_pair(parse("x"), parse("y"), cert)

    def test_adding_function_of_p_keeps_jacobian(self, ex):
        assert verify_pair(ex.p, ex.q + ex.p ** 3, ex.certificate)

    def test_tampered_weight_fails_with_residual(self, ex):
        bad = MateCertificate(-1, (Fraction(2), Fraction(13)), (ex.m1, ex.m2), ex.certificate.bezout)
        with pytest.raises(IdentityFails) as err:
            verify_pair(ex.p, ex.q, bad)
        assert err.value.residual  # nonzero residual witness
        assert err.value.residual == -(ex.m2 ** 2)

    def test_broken_bezout(self, ex):
        bad = MateCertificate(
            ex.certificate.sign,
            ex.certificate.weights,
            ex.certificate.witnesses,
            ((parse("x"), parse("y")),),
        )
        with pytest.raises(CommonZeroUnproven):
            verify_pair(ex.p, ex.q, bad)

    def test_sign_at_random_points(self, ex):
        # The verified identity forces J(p,q) to carry cert.sign everywhere.
        rng = random.Random(20260808)
        jac = jacobian_det(ex.p, ex.q)
        for _ in range(100):
            x = Fraction(rng.randint(-400, 400), rng.randint(1, 40))
            y = Fraction(rng.randint(-400, 400), rng.randint(1, 40))
            val = jac.evaluate(x, y)
            assert val != 0
            assert (val > 0) == (ex.certificate.sign > 0)

    def test_json_roundtrip(self, ex):
        data = ex.certificate.to_json()
        cert = MateCertificate.from_json(data)
        assert verify_pair(ex.p, ex.q, cert)


class TestCertifier:
    def test_quadratic_like_fixture(self):
        v = no_mate_certifier(parse("x + x*y^2 + y"))
        assert v.verdict == "QuadraticLikeDichotomy"

    def test_trivial_fibration(self):
        v = no_mate_certifier(parse("x+y"))
        assert v.verdict == "TrivialFibration"

    def test_new1_fixture(self, newone6):
        v = no_mate_certifier(newone6)
        assert v.verdict == "NoMate" and v.rule == "new1"
        steps = [s for s in v.evidence["steps"] if s.get("rule") == "new1"]
        assert steps and steps[0]["N"] == "1 **3** 3"

    def test_new1_fixture_is_certified_submersion(self, newone6):
        assert certify_submersion(newone6).status == "certified"

    def test_new1_fixture_oracle_confirms_nonconstant_N(self, newone6):
        n = n_function(newone6)
        assert not n.is_constant()
        left = numeric_component_count(newone6, Fraction(-1, 4), grid=256)
        right = numeric_component_count(newone6, 2, box_halfwidth=Fraction(4), grid=256)
        assert left == n.evaluate(Fraction(-1, 4)) == 1
        assert right == n.evaluate(2) == 3

    def test_soundness_guard_no_mate_needs_nonconstant_N(self):
        # N == 1 inputs must never come back as NoMate.
        for text in ("x+y", "1+x+y+x*y+x^2*y"):
            v = no_mate_certifier(parse(text))
            assert v.verdict != "NoMate"

    def test_not_submersion_is_inconclusive(self):
        v = no_mate_certifier(parse("x^2+y^2"))
        assert v.verdict == "Inconclusive"

    def test_degree7_not_claimed_mateless(self, ex):
        # p7 HAS a verified mate; the certifier must not say NoMate.
        v = no_mate_certifier(ex.p, caller_certified_submersion=True)
        assert v.verdict in ("Inconclusive", "TrivialFibration")
        assert v.verdict == "Inconclusive"

    def test_invariance_under_own_normalization(self, broughton, broughton_shifted):
        # Re-running on the convenient form the certifier itself would apply
        # yields the same verdict class.
        for p in (broughton, broughton_shifted):
            before = no_mate_certifier(p)
            after = no_mate_certifier(make_convenient(p).poly)
            assert before.verdict == after.verdict

    def test_lemma2_reduction_path(self):
        # Vertical edge (3,0)-(3,3) with a double root: p_S = x^3 (y-1)^2 (y+1).
        # After y := y+1 the certifier re-dispatches and settles the shifted
        # polynomial without claiming NoMate (its N is constant 1).
        p = parse("x^3*(y-1)^2*(y+1) + y^4 + x - 3")
        v = no_mate_certifier(p)
        steps = v.evidence.get("steps", [])
        assert any(s.get("rule") == "lemma2-reduction" for s in steps) or v.verdict != "NoMate"
