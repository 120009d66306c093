"""Jacobian pairs: exact sum-of-squares verification, the built-in degree-7
non-injective pair, and a rule engine that certifies "no Jacobian mate"
conclusions from Newton-polygon branch data.

Every verification here is an exact polynomial identity (empty residual),
never a numerically small one.  The certifier only ever returns NoMate with
a named rule and explicit evidence; anything outside the implemented rules
is Inconclusive, not guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .laurent import (
    LaurentPoly,
    exact_divide,
    jacobian_det,
    parse,
    poly_from_json,
    poly_to_json,
    substitute_affine,
)
from . import univariate as uv
from .polygon import (
    OuterEdge,
    edge_factorization,
    edge_univariate,
    interior_lattice_points,
    is_convenient,
    newton_polygon,
    outer_edges,
)
from .branchcount import (
    ConstructibleFn,
    NotConvenient,
    UnclassifiableEdge,
    edge_constructible,
    make_convenient,
    n_function,
)
from .resultants import certify_submersion


class IdentityFails(ArithmeticError):
    """An exact polynomial identity failed; carries the nonzero residual."""

    def __init__(self, message: str, residual: LaurentPoly):
        super().__init__(f"{message}: residual {residual}")
        self.residual = residual


class CommonZeroUnproven(ArithmeticError):
    """The certificate's no-common-zero argument did not validate."""


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MateCertificate:
    """sign * J(p,q) = sum lambda_i * M_i^2, plus a proof that the M_i have
    no common real zero (a Bezout combination summing to 1, or an explicit
    disclaimer that only a numeric search was done)."""

    sign: int
    weights: tuple[Fraction, ...]
    witnesses: tuple[LaurentPoly, ...]
    bezout: tuple[tuple[LaurentPoly, LaurentPoly], ...] | None
    disclaimer: str | None = None

    def to_json(self) -> dict:
        out = {
            "sign": self.sign,
            "weights": [str(w) for w in self.weights],
            "witnesses": [poly_to_json(m) for m in self.witnesses],
        }
        if self.bezout is not None:
            out["bezout"] = [[poly_to_json(u), poly_to_json(g)] for u, g in self.bezout]
        if self.disclaimer is not None:
            out["disclaimer"] = self.disclaimer
        return out

    @staticmethod
    def from_json(data: dict) -> "MateCertificate":
        bez = None
        if "bezout" in data:
            bez = tuple((poly_from_json(u), poly_from_json(g)) for u, g in data["bezout"])
        return MateCertificate(
            sign=int(data["sign"]),
            weights=tuple(Fraction(w) for w in data["weights"]),
            witnesses=tuple(poly_from_json(m) for m in data["witnesses"]),
            bezout=bez,
            disclaimer=data.get("disclaimer"),
        )


def verify_bezout(terms, expected: LaurentPoly) -> tuple[bool, LaurentPoly]:
    """Expand sum(u_i * g_i) and compare with the expected polynomial."""
    total = LaurentPoly.zero()
    for u, g in terms:
        total = total + u * g
    residual = total - expected
    return (not residual), residual


def verify_pair(p: LaurentPoly, q: LaurentPoly, cert: MateCertificate) -> bool:
    """True iff sign*J(p,q) equals the weighted sum of squares exactly and
    the no-common-zero proof validates."""
    if len(cert.weights) != len(cert.witnesses):
        raise ValueError("weights and witnesses must pair up")
    if any(w <= 0 for w in cert.weights):
        raise ValueError("weights must be positive")
    jac = jacobian_det(p, q)
    sos = LaurentPoly.zero()
    for lam, m in zip(cert.weights, cert.witnesses):
        sos = sos + LaurentPoly.const(lam) * m * m
    residual = LaurentPoly.const(cert.sign) * jac - sos
    if residual:
        raise IdentityFails("sign * J(p,q) != sum of weighted squares", residual)
    if cert.bezout is not None:
        ok, bez_residual = verify_bezout(cert.bezout, LaurentPoly.const(1))
        if not ok:
            raise CommonZeroUnproven(f"Bezout combination is not 1: residual {bez_residual}")
    elif cert.disclaimer is None:
        raise CommonZeroUnproven("certificate has neither a Bezout proof nor a disclaimer")
    return True


# ---------------------------------------------------------------------------
# The degree-7 example (built in, all identities checked at construction)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Degree7Example:
    p: LaurentPoly
    q: LaurentPoly
    m: LaurentPoly
    w: LaurentPoly
    m1: LaurentPoly
    m2: LaurentPoly
    r: LaurentPoly
    s: LaurentPoly
    certificate: MateCertificate


def build_degree7() -> Degree7Example:
    """Construct the degree-7 non-injective Jacobian pair and verify every
    defining identity exactly; construction aborts on any failure."""
    m = parse("1+x+x^2*y")
    g = parse("1+y+2*x*y+x^2*y^2")
    p = m * g
    w = parse("1+x*y") * m

    if p.total_degree() != 7:
        raise IdentityFails("deg p != 7", p)
    if p - m * g:
        raise IdentityFails("p != m*(1+y+2xy+x^2y^2)", p - m * g)

    bracket = (
        LaurentPoly.const(2) * (12 + 31 * w) * p ** 3
        + (-6 - 68 * w + 5 * w ** 2 + 22 * w ** 3) * p ** 2
        + LaurentPoly.const(2) * (7 + 11 * w - 28 * w ** 2 + 17 * w ** 3 + w ** 4) * w * p
        - (7 - 14 * w + 7 * w ** 2 + 11 * w ** 4 - 10 * w ** 5) * w ** 2
    )
    q = exact_divide(bracket, m * m)
    m1 = exact_divide(-p + 5 * p ** 2 - 6 * p * w ** 2 + 4 * w ** 3 - 3 * w ** 4, m)
    m2 = p * (w ** 2 - p)

    # J(p, w) = -m p, and the cleared-denominator form of
    # J(p, 1/m^2) = 2(2w-1)/m^2, namely J(p, m) = -m(2w - 1).
    res = jacobian_det(p, w) + m * p
    if res:
        raise IdentityFails("J(p,w) != -m p", res)
    res = jacobian_det(p, m) + m * (2 * w - 1)
    if res:
        raise IdentityFails("J(p,m) != -m(2w-1)", res)

    r = parse("1+2*x*y")
    s = parse("1 + 2*x - 4*y + 2*x*y + 8*x^2*y + 10*x^3*y^2 + 4*x^4*y^3")
    cert = MateCertificate(
        sign=-1,
        weights=(Fraction(2), Fraction(12)),
        witnesses=(m1, m2),
        bezout=(
            (LaurentPoly.const(4) * r, p - w ** 2),
            (s, 2 * w - 1),
        ),
    )
    verify_pair(p, q, cert)
    return Degree7Example(p=p, q=q, m=m, w=w, m1=m1, m2=m2, r=r, s=s, certificate=cert)


# ---------------------------------------------------------------------------
# The no-mate rule engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MateVerdict:
    verdict: str          # TrivialFibration | NoMate | QuadraticLikeDichotomy | Inconclusive
    rule: str | None      # tag of the applied lemma for NoMate verdicts
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "rule": self.rule, "trace": self.evidence}


def _is_quadratic_like(p: LaurentPoly) -> bool:
    """Degree below 3 in x or in y, except for bilinear-or-simpler inputs
    (degree <= 1 in both variables), which the nondegenerate rule settles
    outright as trivial fibrations."""
    if p.degree_in("x") <= 1 and p.degree_in("y") <= 1:
        return False
    return p.degree_in("x") < 3 or p.degree_in("y") < 3


def _find_lemma2_edge(work: LaurentPoly) -> OuterEdge | None:
    np_ = newton_polygon(work)
    if not (is_convenient(np_) and np_.has_positive_area()):
        return None
    for edge in outer_edges(np_):
        if {edge.q1, edge.q2} == {(3, 0), (3, 3)}:
            return edge
    return None


def no_mate_certifier(p: LaurentPoly, caller_certified_submersion: bool = False) -> MateVerdict:
    """Apply the no-mate rules in order; sound by construction (rules abstain
    whenever their evidence is not fully computed).

    Order: submersion certification, quadratic-like dichotomy, nondegenerate
    (trivial fibration), the (3,0)-(3,3) edge reduction, the N - N_S
    dichotomy for one-interior-point edges, and the one_three breakpoint
    criterion.  Everything else is Inconclusive with a full trace.
    """
    trace: dict = {"steps": []}
    if not caller_certified_submersion:
        cert = certify_submersion(p)
        trace["submersion"] = {"status": cert.status, "reason": cert.reason}
        if cert.status == "not_submersion":
            return MateVerdict("Inconclusive", None, {**trace, "reason": "not a submersion"})
        if cert.status == "inconclusive":
            return MateVerdict("Inconclusive", None, {**trace, "reason": "submersion not certified"})
    else:
        trace["submersion"] = {"status": "caller_certified"}
    return _dispatch(p, trace, depth=0)


def _dispatch(p: LaurentPoly, trace: dict, depth: int) -> MateVerdict:
    if depth > 8:
        return MateVerdict("Inconclusive", None, {**trace, "reason": "reduction depth exhausted"})

    # (a) quadratic-like polynomials fall under the BFM dichotomy.
    if _is_quadratic_like(p):
        trace["steps"].append({"rule": "quadratic-like", "deg_x": p.degree_in("x"), "deg_y": p.degree_in("y")})
        return MateVerdict("QuadraticLikeDichotomy", "quadratic-like", trace)

    try:
        conv = make_convenient(p)
    except NotConvenient as exc:
        return MateVerdict("Inconclusive", None, {**trace, "reason": str(exc)})
    work = conv.poly
    if not conv.is_identity():
        trace["steps"].append({"normalization": {"matrix": conv.matrix}})
        if _is_quadratic_like(work):
            trace["steps"].append({"rule": "quadratic-like", "after": "normalization"})
            return MateVerdict("QuadraticLikeDichotomy", "quadratic-like", trace)

    padded = work if work.coeff(0, 0) else work + 1
    np_ = newton_polygon(padded)
    edges = outer_edges(np_)
    degenerate = [e for e in edges if edge_factorization(padded, e).max_real_multiplicity() > 1]

    # (b) nondegenerate: N is constant, hence 1 by the Euler identity.
    if not degenerate:
        try:
            n = n_function(work)
        except (UnclassifiableEdge, NotConvenient) as exc:
            return MateVerdict("Inconclusive", None, {**trace, "reason": str(exc)})
        assert n.is_constant()
        trace["steps"].append({"rule": "nondegenerate", "N": n.type_notation()})
        return MateVerdict("TrivialFibration", "nondegenerate", trace)

    # (c) the (3,0)-(3,3) edge: shift y by the double root and re-dispatch.
    lemma2_edge = _find_lemma2_edge(padded)
    if lemma2_edge is not None and lemma2_edge in degenerate:
        f = edge_univariate(padded, lemma2_edge)
        double_roots = [val for val, mult in uv.rational_roots(f) if mult >= 2]
        if double_roots:
            a = double_roots[0]
            shifted = substitute_affine(work, ((1, 0), (0, 1)), (0, a))
            trace["steps"].append({"rule": "lemma2-reduction", "shift_y_by": str(a)})
            return _dispatch(shifted, trace, depth + 1)

    # Full N and per-edge data for the dichotomy rules.
    try:
        n_total = n_function(work)
        edge_fns = {id(e): edge_constructible(work, e) for e in edges}
    except (UnclassifiableEdge, NotConvenient) as exc:
        return MateVerdict("Inconclusive", None, {**trace, "reason": f"unclassifiable edge: {exc}"})

    special = [e for e in edges if len(interior_lattice_points(e)) == 1]

    # (d) Lemma new1: N - N_S constant for a one-interior-point edge.
    for edge in special:
        ns = edge_fns[id(edge)]
        rest = _subtract(n_total, ns)
        if rest.is_constant():
            if n_total.is_constant():
                value = n_total.interval_values[0]
                assert value == 1, "submersion with constant N must have N == 1"
                trace["steps"].append({"rule": "new1", "N": n_total.type_notation(), "constant": True})
                return MateVerdict("TrivialFibration", "new1", trace)
            trace["steps"].append(
                {
                    "rule": "new1",
                    "edge": {"endpoints": [list(edge.q1), list(edge.q2)]},
                    "N": n_total.type_notation(),
                    "N_S": ns.type_notation(),
                    "N_minus_NS": rest.type_notation(),
                }
            )
            assert not _is_constant_one(n_total), "soundness guard: NoMate requires nonconstant N"
            return MateVerdict("NoMate", "new1", trace)

    # (e) Corollary one_three: a special edge with N_S(c0) = 2 and N pinched.
    for edge in special:
        ns = edge_fns[id(edge)]
        nsn = ns.normalize()
        if not nsn.breakpoints:
            continue
        for k, c0 in enumerate(nsn.breakpoints):
            if nsn.point_values[k] != 2:
                continue
            n_at = n_total.evaluate(c0)
            left = n_total.interval_values[_interval_index(n_total, c0)]
            right = n_total.interval_values[_interval_index(n_total, c0) + 1]
            if n_at == 3 or left == 1 or right == 1:
                trace["steps"].append(
                    {
                        "rule": "one_three",
                        "edge": {"endpoints": [list(edge.q1), list(edge.q2)]},
                        "c0": str(c0),
                        "N(c0)": n_at,
                        "N_left": left,
                        "N_right": right,
                    }
                )
                assert not _is_constant_one(n_total)
                return MateVerdict("NoMate", "one_three", trace)

    trace["N"] = n_total.type_notation()
    return MateVerdict("Inconclusive", None, {**trace, "reason": "no rule applied"})


def _subtract(a: ConstructibleFn, b: ConstructibleFn) -> ConstructibleFn:
    neg = ConstructibleFn(b.breakpoints, tuple(-v for v in b.interval_values), tuple(-v for v in b.point_values))
    return (a + neg).normalize()


def _is_constant_one(n: ConstructibleFn) -> bool:
    nn = n.normalize()
    return not nn.breakpoints and nn.interval_values[0] == 1


def _interval_index(fn: ConstructibleFn, c: Fraction) -> int:
    """Index of the open interval immediately left of the breakpoint c."""
    for k, b in enumerate(fn.breakpoints):
        if c == b:
            return k
        if c < b:
            return k
    return len(fn.breakpoints)