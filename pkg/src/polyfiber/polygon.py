"""Newton polygon geometry: support hull, outer edges, edge factorization,
and the unimodular monomial substitution that straightens an outer edge.

All predicates are exact integer/rational arithmetic; the convex hull is a
monotone chain with integer cross products (no epsilons anywhere).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .laurent import LaurentPoly, exact_divide, substitute_monomial
from . import univariate as uv
from .univariate import RootDescriptor, UPoly

Point = tuple[int, int]


class DegeneratePolygon(ValueError):
    """Zero-area Newton polygon where positive area is required."""


class UnsupportedRootField(ArithmeticError):
    """An edge root needed exactly is algebraic of degree > 2 over Q."""


def support(p: LaurentPoly) -> set[Point]:
    """The exponent support of p as a set of lattice points."""
    if not p:
        raise ValueError("zero polynomial has no support")
    return p.support()


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: set[Point]) -> list[Point]:
    """Vertices of the convex hull, counterclockwise, collinear points dropped."""
    pts = sorted(points)
    if len(pts) == 1:
        return pts
    lower: list[Point] = []
    for pt in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    upper: list[Point] = []
    for pt in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return hull


@dataclass(frozen=True)
class NewtonPolygon:
    """Convex hull of the support: vertices counterclockwise, strictly convex."""

    vertices: tuple[Point, ...]
    support_size: int

    def has_positive_area(self) -> bool:
        return len(self.vertices) >= 3

    def contains(self, pt: Point) -> bool:
        """Point inside or on the hull (exact)."""
        verts = self.vertices
        if len(verts) == 1:
            return pt == verts[0]
        if len(verts) == 2:
            a, b = verts
            if _cross(a, b, pt) != 0:
                return False
            return min(a[0], b[0]) <= pt[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= pt[1] <= max(a[1], b[1])
        n = len(verts)
        return all(_cross(verts[k], verts[(k + 1) % n], pt) >= 0 for k in range(n))


def newton_polygon(p: LaurentPoly) -> NewtonPolygon:
    pts = support(p)
    return NewtonPolygon(tuple(convex_hull(pts)), len(pts))


def is_convenient(np_: NewtonPolygon) -> bool:
    """True iff the hull touches both positive coordinate axes away from 0."""
    on_x = any(j == 0 and i > 0 for i, j in np_.vertices)
    on_y = any(i == 0 and j > 0 for i, j in np_.vertices)
    return on_x and on_y


@dataclass(frozen=True)
class OuterEdge:
    """Hull edge whose primitive outward normal has a positive coordinate.

    q1, q2 follow the counterclockwise hull orientation; lattice_count_bar is
    #(S cap Z^2) - 1, i.e. the lattice length of the edge.
    """

    q1: Point
    q2: Point
    normal: tuple[int, int]
    lattice_count_bar: int

    def height(self) -> int:
        """<normal, q> on the edge (the supporting-line value)."""
        return self.normal[0] * self.q1[0] + self.normal[1] * self.q1[1]

    def direction(self) -> tuple[int, int]:
        """Primitive step g = (-xi2, xi1); one endpoint + N*g reaches the other."""
        return (-self.normal[1], self.normal[0])

    def base(self) -> Point:
        """The endpoint from which stepping by direction() covers the edge."""
        g = self.direction()
        n = self.lattice_count_bar
        if (self.q1[0] + n * g[0], self.q1[1] + n * g[1]) == self.q2:
            return self.q1
        assert (self.q2[0] + n * g[0], self.q2[1] + n * g[1]) == self.q1
        return self.q2

    def lattice_points(self) -> list[Point]:
        b = self.base()
        g = self.direction()
        return [(b[0] + k * g[0], b[1] + k * g[1]) for k in range(self.lattice_count_bar + 1)]


def _angle_cmp(u: tuple[int, int], v: tuple[int, int]) -> int:
    def quadrant(w):
        x, y = w
        if x > 0 and y >= 0:
            return 0
        if x <= 0 and y > 0:
            return 1
        if x < 0 and y <= 0:
            return 2
        return 3

    qu, qv = quadrant(u), quadrant(v)
    if qu != qv:
        return -1 if qu < qv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    return 0 if cross == 0 else (-1 if cross > 0 else 1)


def outer_edges(np_: NewtonPolygon) -> list[OuterEdge]:
    """All outer edges, ordered by the angle of their outward normal."""
    if not np_.has_positive_area():
        raise DegeneratePolygon("outer edges require a polygon of positive area")
    verts = np_.vertices
    n = len(verts)
    out = []
    for k in range(n):
        a, b = verts[k], verts[(k + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        g = gcd(abs(dx), abs(dy))
        # CCW orientation: outward normal is the direction rotated by -90 deg.
        nx, ny = dy // g, -dx // g
        if nx > 0 or ny > 0:
            edge = OuterEdge(a, b, (nx, ny), g)
            _check_supporting(np_, edge)
            out.append(edge)
    out.sort(key=functools.cmp_to_key(lambda e1, e2: _angle_cmp(e1.normal, e2.normal)))
    return out


def _check_supporting(np_: NewtonPolygon, edge: OuterEdge) -> None:
    h = edge.height()
    xi = edge.normal
    assert xi[0] * edge.q2[0] + xi[1] * edge.q2[1] == h
    for v in np_.vertices:
        if v in (edge.q1, edge.q2):
            continue
        assert xi[0] * v[0] + xi[1] * v[1] < h, "supporting-line property violated"


def interior_lattice_points(edge: OuterEdge) -> list[Point]:
    """Lattice points strictly between the endpoints."""
    return edge.lattice_points()[1:-1]


# ---------------------------------------------------------------------------
# Edge polynomials and their binomial factorization
# ---------------------------------------------------------------------------


def edge_poly(p: LaurentPoly, edge: OuterEdge) -> LaurentPoly:
    """The sum of p's terms whose exponents lie on the edge."""
    xi = edge.normal
    h = edge.height()
    return LaurentPoly({e: c for e, c in p.items() if xi[0] * e[0] + xi[1] * e[1] == h})


def edge_univariate(p: LaurentPoly, edge: OuterEdge) -> UPoly:
    """Coefficients of p along the edge, from base() in direction(): the
    polynomial f with p_S = delta * x^r y^s * prod (u - c_i)^{nu_i} after the
    toric substitution (f = delta * prod(u - c_i)^{nu_i})."""
    return uv.upoly([p.coeff(i, j) for (i, j) in edge.lattice_points()])


@dataclass(frozen=True)
class EdgeFactorization:
    """p_S = delta x^r y^s prod_i (y^xi1 - c_i x^xi2)^{nu_i}; the roots c_i are
    pairwise distinct and nonzero, with reality flags."""

    delta: Fraction
    r: int
    s: int
    factors: tuple[tuple[RootDescriptor, int, bool], ...]  # (root, multiplicity, is_real)

    def real_root_count(self) -> int:
        return sum(1 for _, _, real in self.factors if real)

    def max_real_multiplicity(self) -> int:
        return max((m for _, m, real in self.factors if real), default=0)


def edge_factorization(p: LaurentPoly, edge: OuterEdge) -> EdgeFactorization:
    f = edge_univariate(p, edge)
    assert f and f[0] and f[-1], "edge endpoints are vertices, so end coefficients are nonzero"
    delta = f[-1]
    base = edge.base()
    n = edge.lattice_count_bar
    r = base[0] - n * edge.normal[1]
    s = base[1]
    factors = tuple(
        (desc, mult, desc.is_real) for desc, mult in uv.root_descriptors(f)
    )
    assert sum(m for _, m, _ in factors) == n, "multiplicities must sum to the lattice length"
    return EdgeFactorization(delta, r, s, factors)


def is_nondegenerate_on(p: LaurentPoly, edge: OuterEdge) -> bool:
    """Every real root of the edge factorization is simple."""
    fact = edge_factorization(p, edge)
    return fact.max_real_multiplicity() <= 1


def is_nondegenerate(p: LaurentPoly) -> bool:
    """Convenient polygon and nondegenerate on every outer edge."""
    np_ = newton_polygon(p)
    if not is_convenient(np_):
        return False
    if not np_.has_positive_area():
        # Convenient segment hulls are handled by adding a constant before
        # asking for outer edges; a bare segment has no outer-edge data.
        raise DegeneratePolygon("add a constant first: polygon has zero area")
    return all(is_nondegenerate_on(p, e) for e in outer_edges(np_))


# ---------------------------------------------------------------------------
# The unimodular monomial substitution (toric straightening of one edge)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubstitutionData:
    """sigma: x = u^eta1 v^-xi1, y = u^eta2 v^-xi2 with xi1 eta2 - xi2 eta1 = 1.

    After the substitution, p(sigma(u,v)) = u^-A v^-B (product_poly(u) + v*tail),
    exactly; product_poly is the edge polynomial in the straightened variable
    (delta times the monic product over the roots c_i) and tail is ordinary.
    """

    xi: tuple[int, int]
    eta: tuple[int, int]
    A: int
    B: int
    product_poly: UPoly
    tail: LaurentPoly

    def reconstruct(self) -> LaurentPoly:
        w = LaurentPoly({(k, 0): c for k, c in enumerate(self.product_poly)})
        w = w + LaurentPoly.monomial(0, 1) * self.tail
        return substitute_monomial(w, (1, 0), (0, 1)) * LaurentPoly.monomial(-self.A, -self.B)

    def apply(self, p: LaurentPoly) -> LaurentPoly:
        """p composed with sigma, as a Laurent polynomial in (u, v)."""
        return substitute_monomial(p, (self.eta[0], -self.xi[0]), (self.eta[1], -self.xi[1]))

    def point_image(self, u: Fraction, v: Fraction) -> tuple[Fraction, Fraction]:
        """sigma(u, v) for nonzero rational u, v."""
        x = Fraction(u) ** self.eta[0] * Fraction(v) ** (-self.xi[0])
        y = Fraction(u) ** self.eta[1] * Fraction(v) ** (-self.xi[1])
        return x, y


def _ext_euclid(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _ext_euclid(b, a % b)
    return g, t, s - (a // b) * t


def _ceil_div(a: int, b: int) -> int:
    assert b > 0
    return -((-a) // b)


def monomial_substitution(p: LaurentPoly, edge: OuterEdge) -> SubstitutionData:
    """Straighten the outer edge: unimodular sigma with the edge horizontal.

    Preconditions: NP(p) convenient with positive area, p(0,0) != 0 (add a
    constant first), edge is an outer edge of NP(p).
    """
    np_ = newton_polygon(p)
    if not is_convenient(np_):
        raise ValueError("monomial_substitution requires a convenient Newton polygon")
    if not np_.has_positive_area():
        raise DegeneratePolygon("monomial_substitution requires positive area")
    if p.coeff(0, 0) == 0:
        raise ValueError("monomial_substitution requires p(0,0) != 0; add a constant first")

    xi = edge.normal
    g, s, t = _ext_euclid(xi[0], xi[1])
    assert g == 1
    eta = (-t, s)
    assert xi[0] * eta[1] - xi[1] * eta[0] == 1

    q2 = edge.base()
    q1 = edge.q1 if q2 == edge.q2 else edge.q2
    # The hull neighbor of q2 away from the edge.
    verts = list(np_.vertices)
    k = verts.index(q2)
    nxt, prv = verts[(k + 1) % len(verts)], verts[(k - 1) % len(verts)]
    q3 = prv if nxt == q1 else nxt
    assert q3 != q1

    d2 = (q2[0] - q3[0], q2[1] - q3[1])
    denom = xi[0] * d2[0] + xi[1] * d2[1]
    assert denom > 0, "supporting line places q3 strictly below the edge"
    K = _ceil_div(eta[0] * d2[0] + eta[1] * d2[1], denom)
    eta = (eta[0] - K * xi[0], eta[1] - K * xi[1])
    assert eta[0] * q2[0] + eta[1] * q2[1] <= eta[0] * q3[0] + eta[1] * q3[1]

    A = -(eta[0] * q2[0] + eta[1] * q2[1])
    B = xi[0] * q2[0] + xi[1] * q2[1]
    assert A >= 0 and B > 0

    image = substitute_monomial(p, (eta[0], -xi[0]), (eta[1], -xi[1]))
    w = LaurentPoly({(i + A, j + B): c for (i, j), c in image.items()})
    assert w.is_ordinary(), "transformed polygon must sit in the first quadrant"

    f = edge_univariate(p, edge)
    w0 = {i: c for (i, j), c in w.items() if j == 0}
    assert w0 == {k: c for k, c in enumerate(f) if c}, "edge terms must land at height zero"
    tail = exact_divide(w - LaurentPoly({(k, 0): c for k, c in enumerate(f)}), LaurentPoly.monomial(0, 1))
    assert tail.is_ordinary()
    return SubstitutionData(xi, eta, A, B, f, tail)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def polygon_report(p: LaurentPoly) -> dict:
    """JSON-ready summary: vertices, outer edges, per-edge factorization."""
    np_ = newton_polygon(p)
    report: dict = {
        "vertices": [list(v) for v in np_.vertices],
        "support_size": np_.support_size,
        "convenient": is_convenient(np_),
        "positive_area": np_.has_positive_area(),
        "edges": [],
    }
    if not np_.has_positive_area():
        return report
    for edge in outer_edges(np_):
        fact = edge_factorization(p, edge)
        report["edges"].append(
            {
                "endpoints": [list(edge.q1), list(edge.q2)],
                "normal": list(edge.normal),
                "lattice_count_bar": edge.lattice_count_bar,
                "interior_lattice_points": [list(q) for q in interior_lattice_points(edge)],
                "nondegenerate": fact.max_real_multiplicity() <= 1,
                "delta": str(fact.delta),
                "monomial_prefactor": [fact.r, fact.s],
                "roots": [
                    {
                        "kind": d.kind,
                        "value": str(d.value) if d.value is not None else None,
                        "multiplicity": m,
                        "real": real,
                        "approx": _fmt_complex(d.approx()),
                    }
                    for d, m, real in fact.factors
                ],
            }
        )
    return report


def polygon_table(p: LaurentPoly) -> str:
    """Human-readable table of the polygon report."""
    rep = polygon_report(p)
    lines = [f"Newton polygon: vertices {rep['vertices']}  convenient={rep['convenient']}"]
    for e in rep.get("edges", []):
        roots = ", ".join(
            f"{r['approx']} (mult {r['multiplicity']}, {'real' if r['real'] else 'complex'})" for r in e["roots"]
        )
        lines.append(
            f"  edge {e['endpoints'][0]}->{e['endpoints'][1]}  normal {tuple(e['normal'])}  "
            f"N_bar={e['lattice_count_bar']}  nondegenerate={e['nondegenerate']}  roots: {roots}"
        )
    return "\n".join(lines)


def _fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"
