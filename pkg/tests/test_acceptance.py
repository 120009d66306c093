"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines.  Every tolerance here is exact (integers and rationals); the only
numeric knobs are the pinned runtimes and the oracle protocol parameters
fixed by the criteria themselves (grid 512, four box doublings).
"""

import random
import time
from fractions import Fraction
from math import gcd

import pytest

from polyfiber.laurent import LaurentPoly, jacobian_det, parse, substitute_monomial
from polyfiber.polygon import (
    edge_factorization,
    interior_lattice_points,
    newton_polygon,
    outer_edges,
)
from polyfiber.branchcount import (
    classify_special_edge,
    edge_constructible,
    interval_probe_set,
    make_convenient,
    n_function,
    ns_at,
    numeric_component_count,
)
from polyfiber.eulercalc import euler_integral, sekalski_check
from polyfiber.matecheck import (
    IdentityFails,
    MateCertificate,
    build_degree7,
    no_mate_certifier,
    verify_bezout,
    verify_pair,
)
from polyfiber.resultants import certify_submersion
from polyfiber.report import analyze


def test_criterion_1_broughton_reproduction():
    """N_S = 1 on edge S, N_R = 1 **2** 1 at breakpoint exactly 1,
    N = 2 **3** 2, integral -1; all exact; runtime < 1 s."""
    t0 = time.perf_counter()
    report = analyze("builtin:broughton-shifted")
    elapsed = time.perf_counter() - t0

    edges = {tuple(e["normal"]): e for e in report["edges"]}
    assert edges[(1, -1)]["n_edge"]["type"] == "1"
    edge_r = edges[(1, 1)]
    assert edge_r["n_edge"]["type"] == "1 **2** 1"
    assert edge_r["n_edge"]["breakpoints"] == ["1"]
    assert report["n_function"]["type"] == "2 **3** 2"
    assert report["n_function"]["breakpoints"] == ["1"]
    assert report["euler"]["integral_N_dchi"] == -1
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    print(f"\nACCEPTANCE 1 PASS: Broughton reproduction exact, {elapsed * 1000:.0f} ms")


def test_criterion_2_degree7_verification():
    """Construction identities, the exact SOS identity, the Bezout identity,
    and the disconnected zero fiber; runtime < 10 s."""
    t0 = time.perf_counter()
    ex = build_degree7()  # aborts unless every construction identity holds
    assert verify_pair(ex.p, ex.q, ex.certificate)
    residual = jacobian_det(ex.p, ex.q) + 2 * ex.m1 ** 2 + 12 * ex.m2 ** 2
    assert not residual  # the empty polynomial
    ok, bez_res = verify_bezout(
        ((4 * ex.r, ex.p - ex.w ** 2), (ex.s, 2 * ex.w - 1)), LaurentPoly.const(1)
    )
    assert ok and not bez_res
    components = numeric_component_count(ex.p, 0, grid=256)
    assert components >= 2
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"took {elapsed:.3f}s"
    print(
        f"ACCEPTANCE 2 PASS: degree-7 pair verified exactly "
        f"(zero fiber has {components} components), {elapsed:.2f} s"
    )


@pytest.mark.parametrize(
    "text,want_deg,want_integral",
    [("x^2+y^2", 1, 0), ("x^2-y^2", -1, -2), ("x*(1+x*y)", 0, -1)],
)
def test_criterion_3_sekalski_suite(text, want_deg, want_integral):
    """deg_inf grad p = 1 + integral(N) dchi, integer equality; < 5 s each."""
    t0 = time.perf_counter()
    p = parse(text)
    n = n_function(make_convenient(p).poly)
    assert euler_integral(n) == want_integral
    rep = sekalski_check(p, n)
    assert rep["ok"] and rep["lhs"] == want_deg == 1 + want_integral
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0, f"took {elapsed:.3f}s"
    print(f"ACCEPTANCE 3 PASS: Sekalski identity on {text}: {want_deg} = 1 + ({want_integral})")


BOUNDED_FIXTURES = [
    "1+x+y+x^2*y+2*x*y^2+y^3",
    "(1+x+x^2*y)*(1+y+2*x*y+x^2*y^2)",
    "x^2+y^2",
    "x^2-y^2",
    "x+y",
    "(x^2+3*y)*(x-y^2)^2 + (x-y^2)*(y^2+2) + 1",
]


def test_criterion_4_bounded_property_suite():
    """For every fixture edge and 5 probes per interval: N_S <= N_bar,
    constant parity off breakpoints, primitive edges give 1, nondegenerate
    edges constant with the N_bar parity.  All exact."""
    checked = 0
    for text in BOUNDED_FIXTURES:
        p = parse(text)
        work = p if p.coeff(0, 0) else p + 1
        for edge in outer_edges(newton_polygon(work)):
            fn = edge_constructible(p, edge)
            probes = interval_probe_set(fn, per_interval=5)
            values = {c: ns_at(p, edge, c) for c in probes}
            n_bar = edge.lattice_count_bar
            assert all(0 <= v <= n_bar for v in values.values())
            assert len({v % 2 for v in values.values()}) == 1
            if not interior_lattice_points(edge):
                assert set(values.values()) == {1}
            fact = edge_factorization(work, edge)
            if fact.max_real_multiplicity() <= 1:
                assert len(set(values.values())) == 1
                assert next(iter(values.values())) % 2 == n_bar % 2
            for c in probes:
                assert fn.evaluate(c) == values[c]
            checked += 1
    print(f"ACCEPTANCE 4 PASS: bounded-lemma properties on {checked} edges, 5 probes/interval")


ORACLE_FIXTURES = [
    # (name, polynomial, probes, base window)
    ("broughton", "x*(1+x*y)", [-4, -1, 0, Fraction(1, 2), 1, 4], Fraction(5, 2)),
    ("broughton-shifted", "1+x+y+x^2*y+2*x*y^2+y^3", [-3, 0, 1, 2, 5], Fraction(4)),
    (
        "degree7",
        "(1+x+x^2*y)*(1+y+2*x*y+x^2*y^2)",
        [-2, -1, 0, Fraction(1, 8), Fraction(1, 4), 1, 4],
        Fraction(5, 2),
    ),
    ("x+y", "x+y", [-4, 0, 7], Fraction(3)),
]


def test_criterion_5_oracle_cross_validation():
    """n_function equals the numeric component count at every probe; the
    stabilization protocol succeeds within 4 box doublings at grid 512."""
    total = 0
    for name, text, probes, base in ORACLE_FIXTURES:
        p = parse(text)
        n = n_function(make_convenient(p).poly)
        for c in probes:
            c = Fraction(c)
            symbolic = n.evaluate(c)
            count = numeric_component_count(
                p, c, box_halfwidth=max(base, abs(c)), grid=512, max_doublings=4
            )
            assert count == symbolic, (name, c, count, symbolic)
            total += 1
    print(f"ACCEPTANCE 5 PASS: oracle == N at {total} probes (grid 512, <= 4 doublings)")


def test_criterion_6_special_edge_classifier():
    """Edge R of the Broughton-shifted fixture: B = 3 odd, type 1b1 with
    b = 2, sector signs p < c0 on U1 and p > c0 on U2, cross-checked by the
    exact sign of p at points sampled deep inside each sector."""
    p = parse("1+x+y+x^2*y+2*x*y^2+y^3")
    edge = [e for e in outer_edges(newton_polygon(p)) if e.normal == (1, 1)][0]
    rep = classify_special_edge(p, edge)
    assert rep.weight_B == 3 and rep.weight_B % 2 == 1
    assert rep.ns_type == "1b1" and rep.b_value == 2
    assert rep.c0 == 1
    sectors = {s.name: s for s in rep.sector_info}
    assert sectors["U1"].p_minus_c0_sign == -1  # p(a) < c0 for a in U1
    assert sectors["U2"].p_minus_c0_sign == 1

    # Independent cross-check, straight in plane coordinates: at y = +2 the
    # sector walls are the roots of p(x, 2) = 1, and the sign between them
    # must match; likewise at y = -2 for the other sector.
    for y, expected in ((Fraction(2), -1), (Fraction(-2), 1)):
        crossings = []
        prev = None
        xs = [Fraction(k, 16) for k in range(-80, 81)]
        for x in xs:
            val = p.evaluate(x, y) - 1
            sign = (val > 0) - (val < 0)
            if prev is not None and sign != 0 and prev != 0 and sign != prev:
                crossings.append(x)
            if sign != 0:
                prev = sign
        assert len(crossings) == 2, (y, crossings)
        mid = (crossings[0] + crossings[1]) / 2 - Fraction(1, 32)
        val = p.evaluate(mid, y) - 1
        assert ((val > 0) - (val < 0)) == expected
    print("ACCEPTANCE 6 PASS: special-edge classifier, sector signs confirmed by exact samples")


def test_criterion_7_certifier_soundness():
    """Verdicts: QuadraticLikeDichotomy, TrivialFibration, NoMate(new1) on
    the derived degree-6 fixture; tampered certificate rejected with a
    nonzero residual; NoMate never fires on constant-N fixtures."""
    assert no_mate_certifier(parse("x + x*y^2 + y")).verdict == "QuadraticLikeDichotomy"
    assert no_mate_certifier(parse("x+y")).verdict == "TrivialFibration"

    p6 = parse("(x^2+3*y)*(x-y^2)^2 + (x-y^2)*(y^2+2) + 1")
    assert p6.total_degree() == 6
    cert = certify_submersion(p6)
    assert cert.status == "certified", cert.reason
    verdict = no_mate_certifier(p6)
    assert verdict.verdict == "NoMate" and verdict.rule == "new1"
    n6 = n_function(p6)
    assert not n6.is_constant()
    # Oracle confirmation that N is genuinely nonconstant.
    assert numeric_component_count(p6, Fraction(-1, 4), grid=256) == 1 == n6.evaluate(Fraction(-1, 4))
    assert numeric_component_count(p6, 2, box_halfwidth=Fraction(4), grid=256) == 3 == n6.evaluate(2)

    ex = build_degree7()
    tampered = MateCertificate(-1, (Fraction(2), Fraction(13)), (ex.m1, ex.m2), ex.certificate.bezout)
    with pytest.raises(IdentityFails) as err:
        verify_pair(ex.p, ex.q, tampered)
    assert err.value.residual

    # Soundness guard: constant-N inputs never yield NoMate.
    for text in ("x+y", "1+x+y+x*y"):
        assert no_mate_certifier(parse(text)).verdict != "NoMate"
    print("ACCEPTANCE 7 PASS: certifier fixtures incl. degree-6 NoMate(new1); tampering rejected")


def test_criterion_8_substitution_round_trip():
    """200 random primitive normals with entries up to 20: the straightening
    substitution composed with its inverse fixes 50 random monomials, and
    unimodularity holds.  Exact."""

    def ext(a, b):
        if b == 0:
            return (a, 1, 0) if a >= 0 else (-a, -1, 0)
        g, s, t = ext(b, a % b)
        return g, t, s - (a // b) * t

    rng = random.Random(1988)
    done = 0
    while done < 200:
        xi1, xi2 = rng.randint(-20, 20), rng.randint(-20, 20)
        if (xi1, xi2) == (0, 0) or gcd(abs(xi1), abs(xi2)) != 1:
            continue
        _, s, t = ext(xi1, xi2)
        eta1, eta2 = -t, s
        assert xi1 * eta2 - xi2 * eta1 == 1
        monos = LaurentPoly(
            {(rng.randint(-25, 25), rng.randint(-25, 25)): Fraction(1) for _ in range(50)}
        )
        image = substitute_monomial(monos, (eta1, -xi1), (eta2, -xi2))
        back = substitute_monomial(image, (-xi2, xi1), (-eta2, eta1))
        assert back == monos
        done += 1
    print("ACCEPTANCE 8 PASS: 200 unimodular round trips, 50 monomials each, exact")
