"""Dense univariate polynomials over the rationals: gcd, Sturm, roots.

Polynomials are lists of Fractions, index = degree, no trailing zeros
(the zero polynomial is the empty list).  Everything here is exact; real
roots are counted with Sturm sequences and isolated by bisection into
disjoint rational intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

UPoly = list[Fraction]


def upoly(coeffs) -> UPoly:
    """Build a polynomial from low-to-high coefficients, trimming zeros."""
    out = [Fraction(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return out


def degree(p: UPoly) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def is_zero(p: UPoly) -> bool:
    return not p


def ueval(p: UPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def uadd(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    while out and not out[-1]:
        out.pop()
    return out


def uneg(p: UPoly) -> UPoly:
    return [-c for c in p]


def usub(p: UPoly, q: UPoly) -> UPoly:
    return uadd(p, uneg(q))


def umul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    while out and not out[-1]:
        out.pop()
    return out


def uscale(p: UPoly, c: Fraction) -> UPoly:
    return [] if not c else [a * c for a in p]


def udivmod(p: UPoly, d: UPoly) -> tuple[UPoly, UPoly]:
    if not d:
        raise ZeroDivisionError("univariate division by zero")
    r = list(p)
    q = [Fraction(0)] * max(0, len(p) - len(d) + 1)
    lead = d[-1]
    while len(r) >= len(d):
        c = r[-1] / lead
        k = len(r) - len(d)
        q[k] = c
        for i, dc in enumerate(d):
            r[k + i] -= c * dc
        while r and not r[-1]:
            r.pop()
        if not r:
            break
    while q and not q[-1]:
        q.pop()
    return q, r


def udiv_exact(p: UPoly, d: UPoly) -> UPoly:
    q, r = udivmod(p, d)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def uderiv(p: UPoly) -> UPoly:
    return [c * i for i, c in enumerate(p)][1:]


def monic(p: UPoly) -> UPoly:
    return [] if not p else [c / p[-1] for c in p]


def ugcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd by the Euclidean algorithm."""
    a, b = list(p), list(q)
    while b:
        _, r = udivmod(a, b)
        a, b = b, r
    return monic(a)


def squarefree_part(p: UPoly) -> UPoly:
    if degree(p) <= 0:
        return monic(p)
    return monic(udiv_exact(p, ugcd(p, uderiv(p))))


def squarefree_decomposition(p: UPoly) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: return [(g_k, k)] with p = lc * prod g_k^k, g_k monic squarefree."""
    if degree(p) <= 0:
        return []
    p = monic(p)
    dp = uderiv(p)
    a = ugcd(p, dp)
    b = udiv_exact(p, a)
    c = usub(udiv_exact(dp, a), uderiv(b))
    out: list[tuple[UPoly, int]] = []
    k = 1
    while degree(b) > 0:
        g = ugcd(b, c)
        if degree(g) > 0:
            out.append((g, k))
        b2 = udiv_exact(b, g)
        c = usub(udiv_exact(c, g), uderiv(b2))
        b = b2
        k += 1
    return out


# ---------------------------------------------------------------------------
# Sturm sequences and real-root machinery
# ---------------------------------------------------------------------------


def sturm_chain(p: UPoly) -> list[UPoly]:
    chain = [list(p), uderiv(p)]
    while chain[-1]:
        _, r = udivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(uneg(r))
    return [c for c in chain if c]


def _variations(values: list[Fraction]) -> int:
    signs = [v for v in values if v]
    count = 0
    for a, b in zip(signs, signs[1:]):
        if (a > 0) != (b > 0):
            count += 1
    return count


def _variations_at(chain: list[UPoly], x: Fraction) -> int:
    return _variations([ueval(c, x) for c in chain])


def _variations_at_inf(chain: list[UPoly], sign: int) -> int:
    vals = []
    for c in chain:
        if not c:
            continue
        lead = c[-1]
        vals.append(lead if sign > 0 or degree(c) % 2 == 0 else -lead)
    return _variations(vals)


def count_real_roots(p: UPoly, a: Fraction | None = None, b: Fraction | None = None) -> int:
    """Number of distinct real roots in (a, b]; None means -/+ infinity."""
    if degree(p) <= 0:
        return 0
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    va = _variations_at(chain, a) if a is not None else _variations_at_inf(chain, -1)
    vb = _variations_at(chain, b) if b is not None else _variations_at_inf(chain, +1)
    return va - vb


def cauchy_bound(p: UPoly) -> Fraction:
    """All real roots lie in [-bound, bound]."""
    if degree(p) < 1:
        return Fraction(1)
    lead = abs(p[-1])
    return Fraction(1) + max(abs(c) for c in p[:-1]) / lead if len(p) > 1 else Fraction(1)


def min_root_lower_bound(p: UPoly) -> Fraction:
    """A positive rational b with every root of p satisfying |root| >= b.

    Requires p(0) != 0; uses the reciprocal Cauchy bound.
    """
    if not p or not p[0]:
        raise ValueError("polynomial must have a nonzero constant term")
    a0 = abs(p[0])
    rest = max((abs(c) for c in p[1:]), default=Fraction(0))
    if not rest:
        return Fraction(1)
    return a0 / (a0 + rest)


@dataclass(frozen=True)
class Interval:
    """Half-open isolating interval (lo, hi] containing exactly one root."""

    lo: Fraction
    hi: Fraction

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def width(self) -> Fraction:
        return self.hi - self.lo


def isolate_real_roots(p: UPoly) -> list[Interval]:
    """Disjoint isolating intervals for the distinct real roots, ascending."""
    sf = squarefree_part(p)
    if degree(sf) <= 0:
        return []
    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)
    lo, hi = -bound - 1, bound

    def var(x: Fraction) -> int:
        return _variations_at(chain, x)

    out: list[Interval] = []

    def recurse(a: Fraction, b: Fraction, va: int, vb: int) -> None:
        roots = va - vb
        if roots == 0:
            return
        if roots == 1:
            out.append(Interval(a, b))
            return
        m = (a + b) / 2
        vm = var(m)
        recurse(a, m, va, vm)
        recurse(m, b, vm, vb)

    recurse(lo, hi, var(lo), var(hi))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_interval(p: UPoly, iv: Interval, width: Fraction) -> Interval:
    """Shrink an isolating interval of squarefree p below the given width."""
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    lo, hi = iv.lo, iv.hi
    vlo = _variations_at(chain, lo)
    while hi - lo > width:
        m = (lo + hi) / 2
        if _variations_at(chain, m) == vlo:
            lo = m
        else:
            hi = m
    return Interval(lo, hi)


def rational_roots(p: UPoly) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, by the rational root theorem."""
    if degree(p) < 1:
        return []
    # Clear denominators to integer coefficients.
    lcm = 1
    for c in p:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ip = [int(c * lcm) for c in p]
    shift = 0
    while ip and ip[0] == 0:
        ip.pop(0)
        shift += 1
    roots: list[tuple[Fraction, int]] = []
    if shift:
        roots.append((Fraction(0), shift))
    if not ip or len(ip) == 1:
        return roots
    a0, an = abs(ip[0]), abs(ip[-1])
    for num in _divisors(a0):
        for den in _divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * num, den)
                if any(r == cand for r, _ in roots):
                    continue
                if ueval(p, cand) == 0:
                    mult = 0
                    q = list(p)
                    while True:
                        q2, r = udivmod(q, [-cand, Fraction(1)])
                        if r:
                            break
                        mult += 1
                        q = q2
                    roots.append((cand, mult))
    roots.sort(key=lambda t: t[0])
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# Root descriptors: exact identities for the roots of a rational polynomial.
# Rationals are explicit; quadratic roots carry their minimal polynomial and
# a branch index; higher-degree roots carry the (squarefree) factor plus an
# isolating interval when real.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootDescriptor:
    kind: str                      # "rational" | "quadratic" | "algebraic"
    value: Fraction | None         # exact value when kind == "rational"
    minpoly: tuple[Fraction, ...]  # defining polynomial (low-to-high)
    index: int                     # branch: quadratics 0/1 = -/+ sqrt; others enumerate
    is_real: bool
    interval: tuple[Fraction, Fraction] | None = None  # isolating interval for real non-rationals

    def approx(self) -> complex:
        """Floating-point approximation, for display only."""
        if self.kind == "rational":
            return complex(self.value)
        if self.kind == "quadratic":
            c, b, a = self.minpoly
            disc = float(b * b - 4 * a * c)
            re = float(-b) / (2 * float(a))
            half = abs(disc) ** 0.5 / (2 * float(a))
            if disc >= 0:
                return complex(re + (half if self.index else -half))
            return complex(re, half if self.index else -half)
        if self.interval is not None:
            return complex(float((self.interval[0] + self.interval[1]) / 2))
        return complex(float("nan"))


def root_descriptors(p: UPoly) -> list[tuple[RootDescriptor, int]]:
    """Describe every complex root of p with its multiplicity.

    Rational roots are exact; irrational roots of an irreducible quadratic get
    quadratic descriptors; higher-degree squarefree factors contribute real
    roots as isolated intervals and complex roots as conjugate-pair stubs.
    The multiplicities always sum to deg p.
    """
    out: list[tuple[RootDescriptor, int]] = []
    for factor, mult in squarefree_decomposition(p):
        work = list(factor)
        for val, k in rational_roots(factor):
            assert k == 1
            out.append((RootDescriptor("rational", val, tuple(factor), 0, True), mult))
            work = udiv_exact(work, [-val, Fraction(1)])
        if degree(work) == 0:
            continue
        if degree(work) == 2:
            c, b, a = work
            disc = b * b - 4 * a * c
            real = disc > 0
            mp = tuple(work)
            for idx in (0, 1):
                out.append((RootDescriptor("quadratic", None, mp, idx, real), mult))
            continue
        ivs = isolate_real_roots(work)
        mp = tuple(work)
        for idx, iv in enumerate(ivs):
            out.append((RootDescriptor("algebraic", None, mp, idx, True, (iv.lo, iv.hi)), mult))
        n_complex = degree(work) - len(ivs)
        for idx in range(n_complex):
            out.append((RootDescriptor("algebraic", None, mp, len(ivs) + idx, False), mult))
    return out
