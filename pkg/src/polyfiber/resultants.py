"""Resultants and gcds for bivariate polynomials, fraction-free.

Polynomials in a main variable with polynomial coefficients are handled as
coefficient lists; determinants of Sylvester matrices are computed with the
Bareiss fraction-free elimination so every intermediate division is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly, exact_divide
from . import univariate as uv
from .univariate import UPoly


# ---------------------------------------------------------------------------
# Views: ordinary bivariate polynomial as a polynomial in one main variable
# ---------------------------------------------------------------------------


def coeffs_in(p: LaurentPoly, main: str) -> list[UPoly]:
    """Coefficient list of p in the main variable ('x' or 'y'); entry k is a
    UPoly in the other variable.  Requires an ordinary polynomial."""
    if not p.is_ordinary():
        raise ValueError("coefficient view requires an ordinary polynomial")
    if not p:
        return []
    k_main = 0 if main == "x" else 1
    deg = max(e[k_main] for e in p.support())
    other_deg = max(e[1 - k_main] for e in p.support())
    rows = [[Fraction(0)] * (other_deg + 1) for _ in range(deg + 1)]
    for (i, j), c in p.items():
        m, o = (i, j) if k_main == 0 else (j, i)
        rows[m][o] = c
    return [uv.upoly(r) for r in rows]


def from_coeffs_in(coeffs: list[UPoly], main: str) -> LaurentPoly:
    terms = {}
    for m, row in enumerate(coeffs):
        for o, c in enumerate(row):
            if c:
                e = (m, o) if main == "x" else (o, m)
                terms[e] = c
    return LaurentPoly(terms)


def _trim(coeffs: list[UPoly]) -> list[UPoly]:
    out = list(coeffs)
    while out and uv.is_zero(out[-1]):
        out.pop()
    return out


# ---------------------------------------------------------------------------
# Bareiss determinant over an exact ring
# ---------------------------------------------------------------------------


def bareiss_det(matrix, mul, sub, div_exact, is_zero, one):
    """Fraction-free determinant; the ring needs exact division only."""
    n = len(matrix)
    if n == 0:
        return one
    m = [row[:] for row in matrix]
    sign = 1
    prev = one
    for k in range(n - 1):
        if is_zero(m[k][k]):
            pivot_row = next((r for r in range(k + 1, n) if not is_zero(m[r][k])), None)
            if pivot_row is None:
                # Entire column is zero below; determinant vanishes.
                return sub(one, one)
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]))
                m[i][j] = div_exact(num, prev)
            m[i][k] = sub(one, one)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else sub(sub(one, one), det)


def _sylvester(f: list, g: list, zero) -> list[list]:
    df, dg = len(f) - 1, len(g) - 1
    n = df + dg
    rows = []
    for k in range(dg):
        row = [zero] * n
        for i, c in enumerate(reversed(f)):
            row[k + i] = c
        rows.append(row)
    for k in range(df):
        row = [zero] * n
        for i, c in enumerate(reversed(g)):
            row[k + i] = c
        rows.append(row)
    return rows


def resultant_upoly(f: list[UPoly], g: list[UPoly]) -> UPoly:
    """Resultant in the main variable of two coefficient lists over Q[t]."""
    f, g = _trim(f), _trim(g)
    if not f or not g:
        return []
    if len(f) == 1 and len(g) == 1:
        return [Fraction(1)]
    if len(f) == 1:
        out = [Fraction(1)]
        for _ in range(len(g) - 1):
            out = uv.umul(out, f[0])
        return out
    if len(g) == 1:
        out = [Fraction(1)]
        for _ in range(len(f) - 1):
            out = uv.umul(out, g[0])
        return out
    matrix = _sylvester(f, g, [])
    return bareiss_det(matrix, uv.umul, uv.usub, uv.udiv_exact, uv.is_zero, [Fraction(1)])


def resultant(p: LaurentPoly, q: LaurentPoly, eliminate: str) -> UPoly:
    """Res over the eliminated variable; the output lives in the other one."""
    return resultant_upoly(coeffs_in(p, eliminate), coeffs_in(q, eliminate))


def resultant_laurent(f: list[LaurentPoly], g: list[LaurentPoly]) -> LaurentPoly:
    """Resultant of two main-variable coefficient lists whose entries are
    themselves bivariate polynomials (used with symbolic parameters)."""
    zero = LaurentPoly.zero()
    one = LaurentPoly.const(1)

    def trim(h):
        h = list(h)
        while h and not h[-1]:
            h.pop()
        return h

    f, g = trim(f), trim(g)
    if not f or not g:
        return zero
    if len(f) == 1 and len(g) == 1:
        return one
    if len(f) == 1:
        return f[0] ** (len(g) - 1)
    if len(g) == 1:
        return g[0] ** (len(f) - 1)
    matrix = _sylvester(f, g, zero)
    return bareiss_det(
        matrix,
        lambda a, b: a * b,
        lambda a, b: a - b,
        exact_divide,
        lambda a: not a,
        one,
    )


# ---------------------------------------------------------------------------
# gcd of bivariate polynomials in a main variable (primitive PRS)
# ---------------------------------------------------------------------------


def _content(f: list[UPoly]) -> UPoly:
    c: UPoly = []
    for coef in f:
        c = uv.ugcd(c, coef)
    return c


def _primitive(f: list[UPoly]) -> list[UPoly]:
    f = _trim(f)
    if not f:
        return []
    cont = _content(f)
    if uv.degree(cont) == 0:
        return [uv.uscale(c, Fraction(1) / cont[0]) for c in f]
    return [uv.udiv_exact(c, cont) for c in f]


def _pseudo_rem(f: list[UPoly], g: list[UPoly]) -> list[UPoly]:
    dg = len(g) - 1
    lc = g[-1]
    r = [uv.upoly(c) for c in f]
    while len(r) - 1 >= dg and r:
        if uv.is_zero(r[-1]):
            r.pop()
            continue
        shift = len(r) - 1 - dg
        top = r[-1]
        r = [uv.umul(c, lc) for c in r]
        for i, gc in enumerate(g):
            r[shift + i] = uv.usub(r[shift + i], uv.umul(top, gc))
        r = _trim(r)
    return r


def gcd_main(f: list[UPoly], g: list[UPoly]) -> list[UPoly]:
    """Primitive gcd in the main variable over Q[t], primitive PRS."""
    a, b = _primitive(f), _primitive(g)
    if not a:
        return b
    if not b:
        return a
    while b:
        r = _primitive(_pseudo_rem(a, b))
        a, b = b, r
    return _primitive(a)


def squarefree_part_main(p: LaurentPoly, main: str) -> LaurentPoly:
    """Squarefree part of an ordinary bivariate polynomial (radical of the
    main-variable square structure, content untouched beyond what the gcd
    removes)."""
    from .laurent import partial

    f = coeffs_in(p, main)
    fp = coeffs_in(partial(p, main), main)
    g = gcd_main(f, fp)
    if len(g) <= 1 and (not g or uv.degree(g[0]) == 0):
        return p
    return exact_divide(p, from_coeffs_in(g, main))


# ---------------------------------------------------------------------------
# Submersion certification by resultants and exact root checking
# ---------------------------------------------------------------------------


class CertifyResult:
    """Outcome of the no-real-critical-point certification."""

    def __init__(self, status: str, reason: str, witness=None):
        assert status in ("certified", "not_submersion", "inconclusive")
        self.status = status
        self.reason = reason
        self.witness = witness

    def __repr__(self):
        return f"CertifyResult({self.status}: {self.reason})"


def certify_submersion(p: LaurentPoly) -> CertifyResult:
    """Certify that grad p never vanishes on R^2, or find a witness.

    A real common zero of (p_x, p_y) projects to a real root of
    Res_y(p_x,p_y) in x and of Res_x(p_x,p_y) in y.  Rational roots are
    checked exactly by specialization; the remaining candidate boxes
    (isolated x-root interval times isolated y-root interval) are emptied
    by exact interval arithmetic with subdivision, which terminates for a
    genuine submersion.  Nothing is ever assumed silently."""
    from .laurent import partial

    px, py = partial(p, "x"), partial(p, "y")
    if not px and not py:
        return CertifyResult("not_submersion", "constant polynomial has zero gradient")
    if not px or not py:
        g = py if not px else px
        # One partial vanishes identically; the other must have no real zeros.
        return _certify_single(g)

    res_x = resultant(px, py, eliminate="y")  # polynomial in x
    res_y = resultant(px, py, eliminate="x")  # polynomial in y
    if not uv.is_zero(res_x) and uv.degree(res_x) == 0:
        return CertifyResult("certified", "Res_y(p_x,p_y) is a nonzero constant")
    if not uv.is_zero(res_y) and uv.degree(res_y) == 0:
        return CertifyResult("certified", "Res_x(p_x,p_y) is a nonzero constant")
    if uv.is_zero(res_x) or uv.is_zero(res_y):
        g = gcd_main(coeffs_in(px, "y"), coeffs_in(py, "y"))
        return CertifyResult(
            "inconclusive",
            f"p_x and p_y share the common factor {from_coeffs_in(g, 'y')}",
        )
    if uv.count_real_roots(res_x) == 0 or uv.count_real_roots(res_y) == 0:
        return CertifyResult("certified", "a gradient resultant has no real roots")

    # Rational x-candidates are decided exactly and give witnesses.
    sf_x = uv.squarefree_part(res_x)
    undecided_x = list(sf_x)
    for val, _ in uv.rational_roots(sf_x):
        out = _check_common_zero_at(px, py, val, main="y", res_var="x")
        if out is not None:
            return out
        undecided_x = uv.udiv_exact(undecided_x, [-val, Fraction(1)])
    if uv.degree(undecided_x) == 0 or uv.count_real_roots(undecided_x) == 0:
        return CertifyResult("certified", "all real resultant roots cleared exactly")

    width = Fraction(1, 32)
    x_boxes = [uv.refine_interval(undecided_x, iv, width) for iv in uv.isolate_real_roots(undecided_x)]
    sf_y = uv.squarefree_part(res_y)
    y_boxes = [uv.refine_interval(sf_y, iv, width) for iv in uv.isolate_real_roots(sf_y)]
    for ix in x_boxes:
        for iy in y_boxes:
            if not _certify_empty_box(px, py, ix.lo, ix.hi, iy.lo, iy.hi, depth=48):
                return CertifyResult(
                    "inconclusive",
                    f"possible common zero near x in ({ix.lo},{ix.hi}], y in ({iy.lo},{iy.hi}]",
                )
    return CertifyResult("certified", "all candidate boxes emptied by interval arithmetic")


def _pow_range(lo: Fraction, hi: Fraction, k: int) -> tuple[Fraction, Fraction]:
    if k == 0:
        return (Fraction(1), Fraction(1))
    a, b = lo ** k, hi ** k
    cands = [a, b]
    if k % 2 == 0 and lo < 0 < hi:
        cands.append(Fraction(0))
    return (min(cands), max(cands))


def interval_eval(p: LaurentPoly, xlo, xhi, ylo, yhi) -> tuple[Fraction, Fraction]:
    """Exact rational bounds for p over the box (naive interval arithmetic)."""
    lo = hi = Fraction(0)
    for (i, j), c in p.items():
        xr = _pow_range(Fraction(xlo), Fraction(xhi), i)
        yr = _pow_range(Fraction(ylo), Fraction(yhi), j)
        prods = [xa * ya for xa in xr for ya in yr]
        tlo, thi = c * min(prods), c * max(prods)
        if c < 0:
            tlo, thi = thi, tlo
        lo += tlo
        hi += thi
    return lo, hi


def _certify_empty_box(px, py, xlo, xhi, ylo, yhi, depth: int) -> bool:
    """True when the box provably contains no common zero of (px, py)."""
    plo, phi = interval_eval(px, xlo, xhi, ylo, yhi)
    if plo > 0 or phi < 0:
        return True
    qlo, qhi = interval_eval(py, xlo, xhi, ylo, yhi)
    if qlo > 0 or qhi < 0:
        return True
    if depth <= 0:
        return False
    if xhi - xlo >= yhi - ylo:
        mid = (xlo + xhi) / 2
        return _certify_empty_box(px, py, xlo, mid, ylo, yhi, depth - 1) and _certify_empty_box(
            px, py, mid, xhi, ylo, yhi, depth - 1
        )
    mid = (ylo + yhi) / 2
    return _certify_empty_box(px, py, xlo, xhi, ylo, mid, depth - 1) and _certify_empty_box(
        px, py, xlo, xhi, mid, yhi, depth - 1
    )


def _certify_single(g: LaurentPoly) -> CertifyResult:
    # Gradient is (g, 0) or (0, g) up to roles: need g without real zeros.
    if g.is_constant():
        return CertifyResult("certified", "gradient has a nonzero constant component")
    # g(x, y) = 0 defines a curve unless g has no real points; check the easy
    # separable cases only.
    for main in ("x", "y"):
        cs = coeffs_in(g, main)
        if len(cs) == 1:
            count = uv.count_real_roots(cs[0])
            if count == 0:
                return CertifyResult("certified", "single gradient component has no real zeros")
            return CertifyResult("not_submersion", "gradient component has a real zero curve")
    return CertifyResult("inconclusive", "one partial vanishes identically; zero set analysis not implemented")


def _check_common_zero_at(px, py, val: Fraction, main: str, res_var: str):
    """Specialize the resultant variable to a rational root and test."""
    sub_px = specialize(px, res_var, val)
    sub_py = specialize(py, res_var, val)
    if uv.is_zero(sub_px) and uv.is_zero(sub_py):
        return CertifyResult("not_submersion", f"gradient vanishes on the line {res_var}={val}")
    g = uv.ugcd(sub_px, sub_py)
    if uv.degree(g) >= 1 and uv.count_real_roots(g) > 0:
        iv = uv.isolate_real_roots(g)[0]
        return CertifyResult(
            "not_submersion",
            f"critical point at {res_var}={val}, {main} in ({iv.lo},{iv.hi}]",
            witness=(val, iv),
        )
    return None


def specialize(p: LaurentPoly, var: str, val: Fraction) -> UPoly:
    """p with one variable set to a rational value, as a UPoly in the other."""
    out: dict[int, Fraction] = {}
    for (i, j), c in p.items():
        if var == "x":
            k, power = j, i
        else:
            k, power = i, j
        out[k] = out.get(k, Fraction(0)) + c * val ** power
    if not out:
        return []
    coeffs = [Fraction(0)] * (max(out) + 1)
    for k, c in out.items():
        coeffs[k] = c
    return uv.upoly(coeffs)
