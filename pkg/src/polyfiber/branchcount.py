"""Branch counting at infinity for real plane curves p(x,y) = c.

Per outer edge S of the Newton polygon, the count N_S(c) of branches at
infinity associated with S is assembled from:

  * primitive edges (no interior lattice points): constant 1;
  * nondegenerate edges: constant, the number of distinct real edge roots;
  * one-interior-lattice-point edges with a double real root: the full
    classifier (type 1b1 / 0b2 / 2b0 with the exact breakpoint c0, sector
    data and sign information), computed with truncated power series over
    Q[c] -- no floating point anywhere;
  * deeper degenerate edges: an exact per-value branch counter (resultant
    stability radius + Sturm counting) with breakpoint candidates read off
    the c-symbolic discriminant; every reported interval is probe-verified
    and anything unverifiable raises UnclassifiableEdge instead of guessing.

N(c) = sum over outer edges; for submersions this equals the number of
connected components of the fiber, which the numeric marching-squares
oracle counts independently (exact rational corner signs, union-find,
box doubling until the count stabilizes twice).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly, partial, substitute_affine
from . import univariate as uv
from .univariate import UPoly
from .polygon import (
    OuterEdge,
    SubstitutionData,
    UnsupportedRootField,
    edge_factorization,
    interior_lattice_points,
    is_convenient,
    monomial_substitution,
    newton_polygon,
    outer_edges,
)
from . import resultants as rs


class UnclassifiableEdge(ArithmeticError):
    """Degenerate edge outside the implemented classifiers; never guessed."""


class TruncationExhausted(ArithmeticError):
    """The splitting series stayed zero up to the hard truncation cap."""


class NonStabilized(ArithmeticError):
    """The numeric component count failed to stabilize across box doublings."""

    def __init__(self, counts):
        super().__init__(f"component count did not stabilize: {counts}")
        self.counts = counts


class NotConvenient(ValueError):
    """The Newton polygon is not convenient; normalize coordinates first."""


# ---------------------------------------------------------------------------
# Constructible functions on the real line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstructibleFn:
    """Finitely many breakpoints with point values and open-interval values.

    interval_values[k] holds on (c_{k-1}, c_k) with c_{-1} = -inf and
    c_l = +inf; point_values[k] holds at breakpoints[k].
    """

    breakpoints: tuple[Fraction, ...]
    interval_values: tuple[int, ...]
    point_values: tuple[int, ...]

    def __post_init__(self):
        assert len(self.interval_values) == len(self.breakpoints) + 1
        assert len(self.point_values) == len(self.breakpoints)
        assert all(a < b for a, b in zip(self.breakpoints, self.breakpoints[1:]))

    @staticmethod
    def constant(value: int) -> "ConstructibleFn":
        return ConstructibleFn((), (value,), ())

    def evaluate(self, c) -> int:
        c = Fraction(c)
        for k, b in enumerate(self.breakpoints):
            if c == b:
                return self.point_values[k]
            if c < b:
                return self.interval_values[k]
        return self.interval_values[-1]

    def __add__(self, other: "ConstructibleFn") -> "ConstructibleFn":
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        ivals = []
        pvals = []
        probes = _interval_probes(bps)
        for probe in probes:
            ivals.append(self.evaluate(probe) + other.evaluate(probe))
        for b in bps:
            pvals.append(self.evaluate(b) + other.evaluate(b))
        return ConstructibleFn(tuple(bps), tuple(ivals), tuple(pvals))

    def with_breakpoints(self, extra) -> "ConstructibleFn":
        """Insert additional (possibly redundant) breakpoints."""
        bps = sorted(set(self.breakpoints) | {Fraction(e) for e in extra})
        ivals = [self.evaluate(p) for p in _interval_probes(bps)]
        pvals = [self.evaluate(b) for b in bps]
        return ConstructibleFn(tuple(bps), tuple(ivals), tuple(pvals))

    def normalize(self) -> "ConstructibleFn":
        """Drop breakpoints where the point value matches equal neighbors."""
        bps, ivals, pvals = list(self.breakpoints), list(self.interval_values), list(self.point_values)
        k = 0
        while k < len(bps):
            if ivals[k] == ivals[k + 1] == pvals[k]:
                del bps[k], pvals[k], ivals[k + 1]
            else:
                k += 1
        return ConstructibleFn(tuple(bps), tuple(ivals), tuple(pvals))

    def is_constant(self) -> bool:
        n = self.normalize()
        return not n.breakpoints

    def type_notation(self) -> str:
        """Display type string: interval values plain, point values in bold."""
        if not self.breakpoints:
            return str(self.interval_values[0])
        parts = [str(self.interval_values[0])]
        for k in range(len(self.breakpoints)):
            parts.append(f"**{self.point_values[k]}**")
            parts.append(str(self.interval_values[k + 1]))
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "breakpoints": [str(b) for b in self.breakpoints],
            "interval_values": list(self.interval_values),
            "point_values": list(self.point_values),
            "type": self.type_notation(),
        }

    @staticmethod
    def from_json(data: dict) -> "ConstructibleFn":
        return ConstructibleFn(
            tuple(Fraction(b) for b in data["breakpoints"]),
            tuple(int(v) for v in data["interval_values"]),
            tuple(int(v) for v in data["point_values"]),
        )


def _interval_probes(bps: list[Fraction]) -> list[Fraction]:
    if not bps:
        return [Fraction(0)]
    probes = [bps[0] - 1]
    for a, b in zip(bps, bps[1:]):
        probes.append((a + b) / 2)
    probes.append(bps[-1] + 1)
    return probes


def interval_probe_set(fn: ConstructibleFn, per_interval: int = 5) -> list[Fraction]:
    """Deterministic probes: midpoints plus 2^k escapes, per interval."""
    bps = list(fn.breakpoints)
    if not bps:
        return [Fraction(k) for k in (-4, -1, 0, 1, 4)][:per_interval]
    probes: list[Fraction] = []
    lo = bps[0]
    probes.extend(lo - Fraction(2) ** k for k in range(per_interval))
    for a, b in zip(bps, bps[1:]):
        width = b - a
        probes.extend(a + width * Fraction(k, per_interval + 1) for k in range(1, per_interval + 1))
    hi = bps[-1]
    probes.extend(hi + Fraction(2) ** k for k in range(per_interval))
    return probes


# ---------------------------------------------------------------------------
# Truncated power series in v with polynomial coefficients in c
# ---------------------------------------------------------------------------
# A series is a list of UPoly (coefficient of v^j is a polynomial in c).


def _s_zero(K: int) -> list[UPoly]:
    return [[] for _ in range(K)]


def _s_add(a: list[UPoly], b: list[UPoly], K: int) -> list[UPoly]:
    return [uv.uadd(a[j] if j < len(a) else [], b[j] if j < len(b) else []) for j in range(K)]


def _s_mul(a: list[UPoly], b: list[UPoly], K: int) -> list[UPoly]:
    out = _s_zero(K)
    for i, ai in enumerate(a[:K]):
        if uv.is_zero(ai):
            continue
        for j, bj in enumerate(b[: K - i]):
            if uv.is_zero(bj):
                continue
            out[i + j] = uv.uadd(out[i + j], uv.umul(ai, bj))
    return out


def _s_scale(a: list[UPoly], c: Fraction, K: int) -> list[UPoly]:
    return [uv.uscale(a[j] if j < len(a) else [], c) for j in range(K)]


def _s_eq(a: list[UPoly], b: list[UPoly], K: int) -> bool:
    for j in range(K):
        x = a[j] if j < len(a) else []
        y = b[j] if j < len(b) else []
        if uv.upoly(x) != uv.upoly(y):
            return False
    return True


def _phi_u_coefficients(p0: LaurentPoly, p1: LaurentPoly, K: int) -> list[list[UPoly]]:
    """Coefficients in u of Phi_c = p0 - c*p1, as series in v over Q[c].

    p0 and p1 are ordinary polynomials in (u, v) (stored in the x, y slots).
    """
    deg_u = 0
    if p0:
        deg_u = max(deg_u, max(i for i, _ in p0.support()))
    if p1:
        deg_u = max(deg_u, max(i for i, _ in p1.support()))
    out = [_s_zero(K) for _ in range(deg_u + 1)]
    for (i, j), c in p0.items():
        if j < K:
            out[i][j] = uv.uadd(out[i][j], [c])
    for (i, j), c in p1.items():
        if j < K:
            out[i][j] = uv.uadd(out[i][j], [Fraction(0), -c])
    return out


def _series_critical_value(ucoeffs: list[list[UPoly]], K: int) -> list[UPoly]:
    """Critical value of u -> Phi(u, v) near u = 0, as a series over Q[c].

    Requires Phi(0,0) = Phi_u(0,0) = 0 and Phi_uu(0,0) a nonzero rational; the
    fiberwise Morse point zeta(v) is found by a v-adically contracting
    fixed-point iteration and the returned series is Phi(zeta(v), v) mod v^K.
    """
    du = [_s_scale(ucoeffs[k], Fraction(k), K) for k in range(1, len(ucoeffs))]
    a = du[1][0] if len(du) > 1 else []
    if len(a) != 1:
        raise ArithmeticError("quadratic coefficient must be a nonzero rational")
    inv_a = Fraction(1) / a[0]

    def eval_at(coe: list[list[UPoly]], z: list[UPoly]) -> list[UPoly]:
        acc = _s_zero(K)
        for ck in reversed(coe):
            acc = _s_add(_s_mul(acc, z, K), ck, K)
        return acc

    zeta = _s_zero(K)
    for _ in range(K + 2):
        val = eval_at(du, zeta)
        step = _s_scale(val, inv_a, K)
        new = [uv.upoly(uv.usub(zeta[j], step[j])) for j in range(K)]
        if _s_eq(new, zeta, K):
            zeta = new
            break
        zeta = new
    # Contract: Phi_u(zeta) must vanish identically mod v^K.
    residue = eval_at(du, zeta)
    assert all(uv.is_zero(uv.upoly(r)) for r in residue), "fixed point did not converge"
    return eval_at(ucoeffs, zeta)


# ---------------------------------------------------------------------------
# splitting_reduction: the public series normal form Hphi = u^2 + h(v)
# ---------------------------------------------------------------------------


def splitting_reduction(H: LaurentPoly, K: int) -> list[Fraction]:
    """Coefficients of h(v) mod v^K with H(phi1(u,v), v) = u^2 + h(v).

    H is an ordinary polynomial in (u, v) (the x, y slots) with
    H(u, 0) = u^2 + higher-order terms in u.  h is the fiberwise critical
    value of u -> H(u, v); substituting the critical point back reproduces
    H up to the quadratic coordinate change (asserted mod v^K).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if not H.is_ordinary():
        raise ValueError("H must be an ordinary polynomial")
    if H.coeff(0, 0) != 0 or H.coeff(1, 0) != 0 or H.coeff(2, 0) != 1:
        raise ValueError("H(u,0) must be u^2 + higher-order terms in u")
    kappa = _series_critical_value(_phi_u_coefficients(H, LaurentPoly.zero(), K), K)
    out = []
    for j in range(K):
        cj = uv.upoly(kappa[j])
        assert uv.degree(cj) <= 0
        out.append(cj[0] if cj else Fraction(0))
    return out


# ---------------------------------------------------------------------------
# The special-edge classifier (one interior lattice point, double real root)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorGerm:
    """One hyperbolic-sector germ at infinity, located qualitatively."""

    name: str                       # "U1" (v > 0 side) or "U2" (v < 0 side)
    v_side: int                     # +1 or -1 in the straightened coordinates
    chart: str                      # "x" (u,v)=(y/x,1/x) or "y" (u,v)=(x/y,1/y)
    chart_halfplane: str            # "upper" / "lower" in that chart
    p_minus_c0_sign: int            # sign of p - c0 inside the sector
    witness: tuple[str, str] | None  # exact rational point inside the sector
    witness_sign: int | None


@dataclass(frozen=True)
class SpecialEdgeReport:
    """Outcome of the one-interior-lattice-point classifier for an edge."""

    edge: OuterEdge
    ns_type: str                    # "constant" | "1b1" | "0b2" | "2b0"
    constant_value: int | None      # set when ns_type == "constant"
    c0: Fraction | None
    weight_B: int
    series_order_m: int | None
    leading_a_sign: int | None      # sign of the leading series coefficient
    b_value: int | None
    left_value: int | None
    right_value: int | None
    sector_info: tuple[SectorGerm, ...] = ()
    connecting_branch: dict | None = None

    def to_constructible(self) -> ConstructibleFn:
        if self.ns_type == "constant":
            return ConstructibleFn.constant(self.constant_value)
        return ConstructibleFn((self.c0,), (self.left_value, self.right_value), (self.b_value,))


def _branch_count(order: int, lead: Fraction, delta: Fraction) -> int:
    """Local branches of u^2 = R(v) with R of the given order and lead/(-delta)."""
    r_lead = -lead / delta
    if order % 2 == 1:
        return 1
    return 2 if r_lead > 0 else 0


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _shift_u(p: LaurentPoly, c1: Fraction) -> LaurentPoly:
    """p(u + c1, v) for ordinary p."""
    return substitute_affine(p, ((1, 0), (0, 1)), (c1, 0))


def _classifier_data(p: LaurentPoly, edge: OuterEdge):
    """Common setup: substitution, the double root, and the shifted pieces.

    Returns (sub, c1, p0, p1) with Phi_c(u, v) = p0 - c * p1 the local germ
    polynomial at the straightened double root.
    """
    sub = monomial_substitution(p, edge)
    f = sub.product_poly
    sf = uv.squarefree_part(f)
    if uv.degree(sf) != 1:
        raise UnclassifiableEdge("edge polynomial is not a perfect power of one linear factor")
    c1 = -sf[0] / sf[1]
    w = LaurentPoly({(k, 0): c for k, c in enumerate(f) if c}) + LaurentPoly.monomial(0, 1) * sub.tail
    p0 = _shift_u(w, c1)
    base = LaurentPoly({(1, 0): Fraction(1), (0, 0): c1})
    p1 = base ** sub.A * LaurentPoly.monomial(0, sub.B)
    return sub, c1, p0, p1


def classify_special_edge(p: LaurentPoly, edge: OuterEdge) -> SpecialEdgeReport:
    """Classify N_S for an outer edge with exactly one interior lattice point.

    Nondegenerate edges give a constant; a degenerate edge (double real
    root, necessarily rational here) is run through the series reduction:
    the exact breakpoint c0, the v-order m of the reduced series, the sign
    of its leading coefficient and the resulting type, plus sector germs
    with exact sign witnesses when branches exist at c0.
    """
    if len(interior_lattice_points(edge)) != 1:
        raise ValueError("classify_special_edge requires exactly one interior lattice point")
    shift = Fraction(0)
    work = p
    if work.coeff(0, 0) == 0:
        work = work + 1
        shift = Fraction(1)  # N_{S,p}(c) = N_{S,p+1}(c+1)

    fact = edge_factorization(work, edge)
    if fact.max_real_multiplicity() <= 1:
        return SpecialEdgeReport(
            edge=edge,
            ns_type="constant",
            constant_value=fact.real_root_count(),
            c0=None,
            weight_B=edge.height(),
            series_order_m=None,
            leading_a_sign=None,
            b_value=None,
            left_value=None,
            right_value=None,
        )

    sub, c1, p0, p1 = _classifier_data(work, edge)
    delta = sub.product_poly[-1]
    B = sub.B
    total_deg = work.total_degree()
    K = B + total_deg + 2
    k_max = 64 * total_deg

    while True:
        kappa = _series_critical_value(_phi_u_coefficients(p0, p1, K), K)
        kappa = [uv.upoly(k) for k in kappa]
        j0 = next((j for j in range(K) if not uv.is_zero(kappa[j])), None)
        if j0 is None:
            if K >= k_max:
                raise TruncationExhausted(
                    f"series vanished mod v^{K}; input is likely not a submersion"
                )
            K = min(2 * K, k_max)
            continue
        rho_j0 = kappa[j0]
        if uv.degree(rho_j0) == 0:
            value = _branch_count(j0, rho_j0[0], delta)
            return SpecialEdgeReport(
                edge=edge,
                ns_type="constant",
                constant_value=value,
                c0=None,
                weight_B=B,
                series_order_m=None,
                leading_a_sign=None,
                b_value=None,
                left_value=None,
                right_value=None,
            )
        # c enters only through -c (u+c1)^A v^B, so the first c-dependent
        # coefficient sits exactly at order B and is affine in c.
        assert j0 == B, f"c-dependence surfaced at order {j0}, expected {B}"
        assert uv.degree(rho_j0) == 1
        klin = rho_j0[1]
        c0 = -rho_j0[0] / klin

        kappa_c0 = [uv.ueval(k, c0) for k in kappa]
        m = next((j for j in range(B + 1, K) if kappa_c0[j]), None)
        if m is None:
            if K >= k_max:
                raise TruncationExhausted(
                    f"reduced series vanished mod v^{K} at c0={c0}; not a submersion?"
                )
            K = min(2 * K, k_max)
            continue
        a_lead = kappa_c0[m]
        break

    left = _branch_count(B, -klin, delta)   # sign of kappa lead for c < c0
    right = _branch_count(B, klin, delta)
    b_value = _branch_count(m, a_lead, delta)
    ns_type = f"{left}b{right}"
    if B % 2 == 1:
        assert ns_type == "1b1"
    else:
        assert ns_type in ("0b2", "2b0")
    assert m > B

    sectors = _sector_info(work, sub, c1, p0, p1, c0, m, a_lead, delta, B)
    connecting = None
    if b_value == 2:
        connecting = _connecting_branch(sub, c1)

    return SpecialEdgeReport(
        edge=edge,
        ns_type=ns_type,
        constant_value=None,
        c0=c0 - shift,
        weight_B=B,
        series_order_m=m,
        leading_a_sign=_sign(a_lead),
        b_value=b_value,
        left_value=left,
        right_value=right,
        sector_info=sectors,
        connecting_branch=connecting,
    )


def _pow_sign(base_sign: int, exponent: int) -> int:
    return base_sign if exponent % 2 else 1


def _sector_info(work, sub: SubstitutionData, c1, p0, p1, c0, m, a_lead, delta, B):
    """Locate the sector germs and evaluate exact sign witnesses inside them."""
    r_lead_sign = _sign(-a_lead / delta)
    sides: list[int] = []
    if m % 2 == 1:
        sides = [r_lead_sign]          # A_odd: both half-branches on one side
    elif r_lead_sign > 0:
        sides = [1, -1]                # A_even^-: a sector on each side
    if not sides:
        return ()

    xi, eta = sub.xi, sub.eta
    chart = "x" if xi[0] >= xi[1] else "y"
    chart_exp_eta = eta[0] if chart == "x" else eta[1]
    chart_exp_xi = xi[0] if chart == "x" else xi[1]
    s_c1 = _sign(c1)
    sign_delta = _sign(delta)
    s_plus = -sign_delta * _pow_sign(s_c1, sub.A)

    phi_c0 = p0 - LaurentPoly.const(c0) * p1
    out = []
    for v_side in sides:
        p_sign = s_plus if v_side > 0 else ((-1) ** B) * s_plus
        halfplane_sign = _pow_sign(s_c1, chart_exp_eta) * _pow_sign(v_side, chart_exp_xi)
        witness = _sector_witness(work, sub, c1, phi_c0, c0, v_side)
        out.append(
            SectorGerm(
                name="U1" if v_side > 0 else "U2",
                v_side=v_side,
                chart=chart,
                chart_halfplane="upper" if halfplane_sign > 0 else "lower",
                p_minus_c0_sign=p_sign,
                witness=(str(witness[0]), str(witness[1])) if witness else None,
                witness_sign=witness[2] if witness else None,
            )
        )
        if witness is not None:
            assert witness[2] == p_sign, "sector sign formula disagrees with exact sample"
    return tuple(out)


def _germ_radius(f: UPoly, c1: Fraction) -> Fraction:
    """Radius around the straightened root below which no other root lives."""
    shifted = _u_shift_upoly(f, c1)
    nu = 0
    while nu < len(shifted) and not shifted[nu]:
        nu += 1
    g = shifted[nu:]
    bound = abs(c1)
    if uv.degree(uv.upoly(g)) >= 1:
        bound = min(bound, uv.min_root_lower_bound(uv.upoly(g)))
    return bound / 2


def _u_shift_upoly(f: UPoly, c1: Fraction) -> UPoly:
    out: UPoly = []
    for c in reversed(f):
        out = uv.uadd(uv.umul(out, [c1, Fraction(1)]), [c])
    return out


def _stable_height(phi: LaurentPoly, rho: Fraction, side: int) -> Fraction:
    """A rational v0 with side*v0 > 0 such that the root pattern of
    phi(. , v) in (-rho, rho) is constant for v between 0 and v0."""
    sf = rs.squarefree_part_main(phi, "x")
    cs = rs.coeffs_in(sf, "x")
    dcs = rs.coeffs_in(partial(sf, "x"), "x")
    res = rs.resultant_upoly(cs, dcs)
    if uv.is_zero(res):
        raise ArithmeticError("discriminant of the squarefree part vanished")
    stability = uv.umul(res, cs[-1])
    for u_val in (rho, -rho):
        stability = uv.umul(stability, rs.specialize(phi, "x", u_val))
    if side < 0:
        stability = [c if k % 2 == 0 else -c for k, c in enumerate(stability)]
    v0 = Fraction(1, 2)
    for _ in range(512):
        if uv.count_real_roots(stability, Fraction(0), v0) == 0:
            return side * v0
        v0 /= 2
    raise ArithmeticError("could not find a stable height; degenerate input?")


def _roots_in_box(phi: LaurentPoly, v0: Fraction, rho: Fraction) -> int:
    slice_u = rs.specialize(phi, "y", v0)
    return uv.count_real_roots(slice_u, -rho, rho)


def _sector_witness(work, sub: SubstitutionData, c1, phi_c0: LaurentPoly, c0, v_side: int):
    """An exact rational point strictly inside the sector germ on one side,
    with the exact sign of p - c0 there."""
    f = sub.product_poly
    rho = _germ_radius(f, c1)
    try:
        v0 = _stable_height(phi_c0, rho, v_side)
    except ArithmeticError:
        return None
    slice_u = rs.specialize(phi_c0, "y", v0)
    sf = uv.squarefree_part(slice_u)
    roots = [iv for iv in uv.isolate_real_roots(sf) if -rho < iv.midpoint() < rho]
    roots = _refine_disjoint(sf, roots, rho)
    if len(roots) != 2:
        return None
    u0 = (roots[0].hi + roots[1].lo) / 2
    x, y = sub.point_image(u0 + c1, v0)
    value = work.evaluate(x, y) - c0
    return (x, y, _sign(value))


def _refine_disjoint(sf: UPoly, roots, rho: Fraction):
    roots = [uv.refine_interval(sf, iv, rho / 8) for iv in roots]
    roots = [iv for iv in roots if -rho < iv.midpoint() < rho]
    roots.sort(key=lambda iv: iv.lo)
    out = []
    for iv in roots:
        while out and iv.lo < out[-1].hi:
            iv = uv.refine_interval(sf, iv, iv.width() / 4)
            out[-1] = uv.refine_interval(sf, out[-1], out[-1].width() / 4)
        out.append(iv)
    return out


def _connecting_branch(sub: SubstitutionData, c1) -> dict:
    """Leading data of the algebraic branch joining the two sectors (the
    image of u = 0 in the straightened coordinates)."""
    return {
        "description": "image of u = 0 under the straightening substitution",
        "x_leading": f"({c1})^{sub.eta[0]} * t^{-sub.xi[0]}",
        "y_leading": f"({c1})^{sub.eta[1]} * t^{-sub.xi[1]}",
    }


# ---------------------------------------------------------------------------
# Exact per-value branch counting (any multiplicity)
# ---------------------------------------------------------------------------


def _germ_phi(work: LaurentPoly, sub: SubstitutionData, c1: Fraction, c: Fraction) -> LaurentPoly:
    f = sub.product_poly
    w = LaurentPoly({(k, 0): coef for k, coef in enumerate(f) if coef}) + LaurentPoly.monomial(0, 1) * sub.tail
    p0 = _shift_u(w, c1)
    base = LaurentPoly({(1, 0): Fraction(1), (0, 0): c1})
    p1 = base ** sub.A * LaurentPoly.monomial(0, sub.B)
    return p0 - LaurentPoly.const(Fraction(c)) * p1


def _local_branch_count(phi: LaurentPoly, rho: Fraction) -> int:
    """Branches at the origin of phi(u, v) = 0 within |u| < rho: half the
    number of real roots on each side at a rigorously stable height."""
    counts = []
    for side in (1, -1):
        v0 = _stable_height(phi, rho, side)
        counts.append(_roots_in_box(phi, v0, rho))
    total = counts[0] + counts[1]
    assert total % 2 == 0, "half-branches must pair into branches"
    return total // 2


def ns_at(p: LaurentPoly, edge: OuterEdge, c) -> int:
    """Exact N_S(c): branches at infinity of p = c associated with the edge.

    Simple real edge roots contribute one branch each (implicit function
    theorem); each multiple real root (necessarily rational to be handled)
    contributes its local germ count, computed rigorously for this c.
    """
    c = Fraction(c)
    shift = Fraction(0)
    work = p
    if work.coeff(0, 0) == 0:
        work = work + 1
        shift = Fraction(1)
    c = c + shift
    fact = edge_factorization(work, edge)
    total = sum(1 for d, mult, real in fact.factors if real and mult == 1)
    multi = [(d, mult) for d, mult, real in fact.factors if real and mult >= 2]
    if not multi:
        return total
    sub = monomial_substitution(work, edge)
    for desc, mult in multi:
        if desc.kind != "rational":
            raise UnsupportedRootField(
                f"multiple real edge root of degree > 1 over Q: {desc.minpoly}"
            )
        c1 = desc.value
        phi = _germ_phi(work, sub, c1, c)
        rho = _germ_radius(sub.product_poly, c1)
        total += _local_branch_count(phi, rho)
    return total


def ns_nondegenerate(p: LaurentPoly, edge: OuterEdge) -> int:
    """Constant N_S for an edge p is nondegenerate on: the number of
    distinct real edge roots (== lattice length mod 2)."""
    fact = edge_factorization(p if p.coeff(0, 0) else p + 1, edge)
    if fact.max_real_multiplicity() > 1:
        raise ValueError("ns_nondegenerate called on a degenerate edge")
    value = fact.real_root_count()
    assert value % 2 == edge.lattice_count_bar % 2
    return value


# ---------------------------------------------------------------------------
# Per-edge constructible functions and their sum N
# ---------------------------------------------------------------------------


def _breakpoint_candidates(work: LaurentPoly, sub: SubstitutionData, c1: Fraction) -> list[Fraction]:
    """Rational candidates for jump points of the germ count at a multiple
    root: values of c where the v-order of the c-symbolic discriminant
    Res_u(Phi_c, d/du Phi_c) exceeds its generic value."""
    f = sub.product_poly
    w = LaurentPoly({(k, 0): coef for k, coef in enumerate(f) if coef}) + LaurentPoly.monomial(0, 1) * sub.tail
    p0 = _shift_u(w, c1)
    base = LaurentPoly({(1, 0): Fraction(1), (0, 0): c1})
    p1 = base ** sub.A * LaurentPoly.monomial(0, sub.B)

    # Coefficients in u; entries are polynomials in (v, c) stored as LaurentPoly.
    deg_u = max(i for i, _ in (p0 + p1).support())
    coeff = [LaurentPoly.zero() for _ in range(deg_u + 1)]
    for (i, j), coef in p0.items():
        coeff[i] = coeff[i] + LaurentPoly.monomial(j, 0, coef)
    for (i, j), coef in p1.items():
        coeff[i] = coeff[i] + LaurentPoly.monomial(j, 1, -coef)
    dcoeff = [coeff[k] * k for k in range(1, len(coeff))]
    res = rs.resultant_laurent(coeff, dcoeff)
    if not res:
        raise UnclassifiableEdge("c-symbolic discriminant vanished identically")
    by_v: dict[int, dict] = {}
    for (j, k), coef in res.items():
        by_v.setdefault(j, {})[k] = coef
    j_gen = min(by_v)
    r = by_v[j_gen]
    poly_c = uv.upoly([r.get(k, Fraction(0)) for k in range(max(r) + 1)])
    if uv.degree(poly_c) <= 0:
        return []
    return [val for val, _ in uv.rational_roots(poly_c)]


def edge_constructible(p: LaurentPoly, edge: OuterEdge) -> ConstructibleFn:
    """N_S as a constructible function of c, classified per the edge shape."""
    work = p if p.coeff(0, 0) else p + 1
    shift = Fraction(0) if p.coeff(0, 0) else Fraction(1)

    if edge.lattice_count_bar == 1:
        return ConstructibleFn.constant(1)
    fact = edge_factorization(work, edge)
    if fact.max_real_multiplicity() <= 1:
        return ConstructibleFn.constant(fact.real_root_count())
    if edge.lattice_count_bar == 2:
        return classify_special_edge(p, edge).to_constructible()

    # Deeper degenerate edge: exact per-value counting with verified
    # breakpoint candidates from the symbolic discriminant.
    sub = monomial_substitution(work, edge)
    candidates: set[Fraction] = set()
    for desc, mult, real in fact.factors:
        if not real or mult == 1:
            continue
        if desc.kind != "rational":
            raise UnsupportedRootField(
                f"multiple real edge root not rational: minpoly {desc.minpoly}"
            )
        candidates.update(_breakpoint_candidates(work, sub, desc.value))
    cands = sorted(candidates)

    def value_at(c: Fraction) -> int:
        return ns_at(p, edge, c)  # ns_at handles the +1 padding internally

    cands_unshifted = [c - shift for c in cands]
    if not cands_unshifted:
        probe_vals = {value_at(Fraction(k)) for k in (-3, -1, 0, 1, 3)}
        if len(probe_vals) != 1:
            raise UnclassifiableEdge("no breakpoint candidates but probe values vary")
        return ConstructibleFn.constant(probe_vals.pop())

    ivals = []
    for probe_set in _verification_probes(cands_unshifted):
        vals = {value_at(q) for q in probe_set}
        if len(vals) != 1:
            raise UnclassifiableEdge(f"probe disagreement across {probe_set}")
        ivals.append(vals.pop())
    pvals = [value_at(b) for b in cands_unshifted]
    fn = ConstructibleFn(tuple(cands_unshifted), tuple(ivals), tuple(pvals)).normalize()
    return fn


def _verification_probes(bps: list[Fraction], n: int = 3) -> list[list[Fraction]]:
    """n probes for each of the len(bps)+1 intervals determined by bps."""
    out = []
    lo = bps[0]
    out.append([lo - Fraction(2) ** k for k in range(n)])
    for a, b in zip(bps, bps[1:]):
        w = b - a
        out.append([a + w * Fraction(k, n + 1) for k in range(1, n + 1)])
    out.append([bps[-1] + Fraction(2) ** k for k in range(n)])
    return out


@dataclass(frozen=True)
class ConvenientForm:
    """A convenient coordinate presentation of p: poly = p(M @ (x,y)).

    Shears preserve fiber components and level values, so N computed for
    poly is N of the original polynomial (identical breakpoints)."""

    poly: LaurentPoly
    matrix: tuple[tuple[int, int], tuple[int, int]]
    original: LaurentPoly

    def is_identity(self) -> bool:
        return self.matrix == ((1, 0), (0, 1))


def _convenient_enough(p: LaurentPoly) -> bool:
    work = p if p.coeff(0, 0) else p + 1
    np_ = newton_polygon(work)
    return is_convenient(np_) and np_.has_positive_area()


def make_convenient(p: LaurentPoly) -> ConvenientForm:
    """Find a small integer shear making the Newton polygon convenient.

    The polygon only needs to touch both axes away from the origin; the
    missing constant (for positive area) is supplied internally by the
    branch-counting routines without changing the level frame."""
    if not p or p.is_constant():
        raise ValueError("constant polynomial has no convenient form")
    if _convenient_enough(p):
        return ConvenientForm(p, ((1, 0), (0, 1)), p)
    for k in (1, -1, 2, -2, 3, -3):
        for matrix in (((1, k), (0, 1)), ((1, 0), (k, 1)), ((1, k), (k, 1))):
            if matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0] == 0:
                continue
            cand = substitute_affine(p, matrix)
            if _convenient_enough(cand):
                return ConvenientForm(cand, matrix, p)
    raise NotConvenient("no small shear makes the polygon convenient")


def n_function(p: LaurentPoly, extra_probes=()) -> ConstructibleFn:
    """N(c) = sum of N_S(c) over the outer edges of a convenient polygon.

    Raises NotConvenient when the polygon needs a preliminary affine change
    (the analysis pipeline applies one and maps breakpoints back).
    """
    work = p if p.coeff(0, 0) else p + 1
    np_ = newton_polygon(work)
    if not is_convenient(np_):
        raise NotConvenient("Newton polygon does not touch both axes away from 0")
    if not np_.has_positive_area():
        raise NotConvenient("Newton polygon has zero area even after adding a constant")
    total = ConstructibleFn.constant(0)
    for edge in outer_edges(np_):
        total = total + edge_constructible(p, edge)
    if extra_probes:
        total = total.with_breakpoints(extra_probes)
    return total


# ---------------------------------------------------------------------------
# Branch data at infinity (leading coefficients, multiplicity, location)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchData:
    """Leading data of one branch at infinity associated with an edge:
    x(t) = A t^-alpha (1 + ...), y(t) = B t^-beta (1 + ...) with
    (alpha, beta) = m * xi."""

    edge: OuterEdge
    m: int
    a_lead: Fraction | None
    b_lead: Fraction | None
    a_approx: float
    b_approx: float
    infinity_point: str

    def alpha_beta(self) -> tuple[int, int]:
        return (self.m * self.edge.normal[0], self.m * self.edge.normal[1])


def branch_data(p: LaurentPoly, edge: OuterEdge) -> list[BranchData]:
    """BranchData for the branches over each real edge root; nondegenerate
    roots give m = 1 with exact leading coefficients when rational."""
    work = p if p.coeff(0, 0) else p + 1
    fact = edge_factorization(work, edge)
    sub = monomial_substitution(work, edge)
    eta = sub.eta
    xi = sub.xi
    if xi[0] > xi[1]:
        point = "[1:0:0]"
    elif xi[0] < xi[1]:
        point = "[0:1:0]"
    else:
        point = None
    out = []
    for desc, mult, real in fact.factors:
        if not real:
            continue
        if mult != 1:
            continue  # degenerate roots are described by SpecialEdgeReport
        if desc.kind == "rational":
            a = desc.value ** eta[0]
            b = desc.value ** eta[1]
            aa, bb = float(a), float(b)
        else:
            a = b = None
            root = desc.approx().real
            aa, bb = root ** eta[0], root ** eta[1]
        pt = point if point is not None else f"[{aa:.6g}:{bb:.6g}:0]"
        out.append(BranchData(edge, 1, a, b, aa, bb, pt))
    return out


# ---------------------------------------------------------------------------
# Numeric fiber-component oracle: exact-sign marching squares + union-find
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        p = self.parent.setdefault(a, a)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        root = p
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _corner_signs(q: LaurentPoly, half: Fraction, grid: int) -> list[list[int]]:
    """Exact signs of q at the (grid+1)^2 corners of [-half, half]^2.

    Corner (i, j) sits at ((2i - grid) * half/grid, ...); all evaluation is
    integer arithmetic after clearing denominators (sign(0) counts as +1 so
    curves through corners still chain through the neighboring cells).
    """
    lcm = 1
    for _, c in q.items():
        lcm = lcm * c.denominator // _igcd(lcm, c.denominator)
    d = q.total_degree() if q else 0
    den = grid * half.denominator
    num = half.numerator

    coeff_int: dict[tuple[int, int], int] = {}
    for (i, j), c in q.items():
        coeff_int[(i, j)] = int(c * lcm) * den ** (d - i - j)
    deg_x = max((i for i, _ in coeff_int), default=0)
    deg_y = max((j for _, j in coeff_int), default=0)
    rows: list[list[int]] = [[0] * (deg_y + 1) for _ in range(deg_x + 1)]
    for (i, j), c in coeff_int.items():
        rows[i][j] += c

    axis = [(2 * k - grid) * num for k in range(grid + 1)]
    signs = []
    for b in axis:
        bpow = [1] * (deg_y + 1)
        for l in range(1, deg_y + 1):
            bpow[l] = bpow[l - 1] * b
        coef_x = [sum(rows[i][l] * bpow[l] for l in range(deg_y + 1)) for i in range(deg_x + 1)]
        col = []
        for a in axis:
            acc = 0
            for ck in reversed(coef_x):
                acc = acc * a + ck
            col.append(1 if acc >= 0 else -1)
        signs.append(col)  # signs[j][i]
    return signs


def _igcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _count_in_box(q: LaurentPoly, half: Fraction, grid: int, core: Fraction | None = None) -> int:
    """Components of {q = 0} meeting the core window, with connectivity taken
    from the full box.  core=None counts everything in the box."""
    signs = _corner_signs(q, half, grid)
    uf = _UnionFind()
    nodes = set()
    core_nodes = set()
    if core is None:
        core = half
    # Corner index window covering |coordinate| <= core: indices with
    # |2k - grid| * half <= core * grid.
    lo = [k for k in range(grid + 1) if abs(2 * k - grid) * half <= core * grid]
    idx_lo, idx_hi = (lo[0], lo[-1]) if lo else (0, grid)

    def in_core(i, j):
        return idx_lo <= i + 1 and i <= idx_hi and idx_lo <= j + 1 and j <= idx_hi

    def edge_h(i, j):
        return ("h", i, j)

    def edge_v(i, j):
        return ("v", i, j)

    for j in range(grid):
        for i in range(grid):
            bl = signs[j][i]
            br = signs[j][i + 1]
            tl = signs[j + 1][i]
            tr = signs[j + 1][i + 1]
            crossings = []
            if bl != br:
                crossings.append(edge_h(i, j))
            if br != tr:
                crossings.append(edge_v(i + 1, j))
            if tl != tr:
                crossings.append(edge_h(i, j + 1))
            if bl != tl:
                crossings.append(edge_v(i, j))
            if not crossings:
                continue
            nodes.update(crossings)
            if in_core(i, j):
                core_nodes.update(crossings)
            if len(crossings) == 2:
                uf.union(crossings[0], crossings[1])
            else:
                # Saddle cell: pair by the exact sign at the center (one
                # level of subdivision).
                cx = Fraction((2 * i + 1 - grid), grid) * half
                cy = Fraction((2 * j + 1 - grid), grid) * half
                center = q.evaluate(cx, cy)
                center_sign = 1 if center >= 0 else -1
                if center_sign == bl:
                    uf.union(edge_h(i, j), edge_v(i + 1, j))
                    uf.union(edge_h(i, j + 1), edge_v(i, j))
                else:
                    uf.union(edge_h(i, j), edge_v(i, j))
                    uf.union(edge_h(i, j + 1), edge_v(i + 1, j))
    return len({uf.find(n) for n in core_nodes})


def _validated_count(q: LaurentPoly, half: Fraction, core: Fraction, grid: int) -> int | None:
    """Count at this scale, refined in grid steps of x1.5 until two successive
    resolutions agree (sign evaluation is exact, so disagreement can only
    mean unresolved features).  None when the cap is hit without agreement."""
    g = grid
    prev = None
    for _ in range(4):
        n = _count_in_box(q, half, g, core=core)
        if prev is not None and n == prev:
            return n
        prev = n
        g = g * 3 // 2
    return None


def numeric_component_count(
    p: LaurentPoly,
    c,
    box_halfwidth=Fraction(5, 2),
    grid: int = 512,
    max_doublings: int = 6,
) -> int:
    """Connected components of the level set p = c meeting the box
    [-box_halfwidth, box_halfwidth]^2.

    Marching squares with exact rational corner signs and union-find.
    Connectivity is recomputed on doubled boxes until the count is attained
    at two consecutive scales: this is how arcs that touch the window
    boundary are matched across scales (an arc that leaves the window and
    comes back is merged once a larger box reveals the connection).  Each
    scale's count is additionally accepted only once two successive grid
    refinements agree on it.  Raises NonStabilized with the scale trace
    when the protocol fails."""
    if grid < 64:
        raise ValueError("grid must be at least 64")
    q = p - LaurentPoly.const(Fraction(c))
    if not q:
        raise ValueError("p - c is identically zero")
    window = Fraction(box_halfwidth)
    half = window
    counts: list[int] = []
    for _ in range(max_doublings + 1):
        n = _validated_count(q, half, window, grid)
        if n is None:
            raise NonStabilized(counts + ["unresolved scale"])
        counts.append(n)
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            return counts[-1]
        half *= 2
    raise NonStabilized(counts)
