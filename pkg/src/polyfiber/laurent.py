"""Exact bivariate Laurent polynomial arithmetic over the rationals.

A polynomial is a finite map from exponent pairs (i, j) to nonzero Fraction
coefficients.  Exponents may be negative (Laurent terms); "ordinary"
polynomials have all exponents >= 0.  The zero polynomial is the empty map.
All arithmetic is exact; no floats ever enter these code paths.

Canonical term order everywhere (printing, equality of printed forms,
division): graded lexicographic on (i, j), highest first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, int]

__all__ = [
    "LaurentPoly",
    "NotDivisible",
    "ParseError",
    "X",
    "Y",
    "ONE",
    "ZERO",
    "parse",
    "poly_from_json",
    "poly_to_json",
    "partial",
    "jacobian_det",
    "exact_divide",
    "highest_part",
    "WeightedPart",
    "weighted_decomposition",
    "substitute_affine",
    "substitute_monomial",
]


class ParseError(ValueError):
    """Raised on malformed polynomial expressions; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotDivisible(ArithmeticError):
    """Exact division failed; ``remainder`` is the nonzero witness."""

    def __init__(self, remainder: "LaurentPoly"):
        super().__init__(f"division leaves nonzero remainder {remainder}")
        self.remainder = remainder


def _grlex_key(e: Exponent) -> tuple[int, int, int]:
    return (e[0] + e[1], e[0], e[1])


class LaurentPoly:
    """Immutable bivariate Laurent polynomial with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Fraction] | Iterable[tuple[Exponent, Fraction]] = ()):
        data: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (i, j), c in items:
            c = Fraction(c)
            if c:
                e = (int(i), int(j))
                acc = data.get(e)
                data[e] = c if acc is None else acc + c
                if not data[e]:
                    del data[e]
        self._terms = data
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return ZERO

    @staticmethod
    def const(c) -> "LaurentPoly":
        return LaurentPoly({(0, 0): Fraction(c)})

    @staticmethod
    def monomial(i: int, j: int, c=1) -> "LaurentPoly":
        return LaurentPoly({(i, j): Fraction(c)})

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def support(self) -> set[Exponent]:
        return set(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_ordinary(self) -> bool:
        """True iff no negative exponents appear."""
        return all(i >= 0 and j >= 0 for i, j in self._terms)

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self._terms)

    def total_degree(self) -> int:
        """Max of i+j over the support; raises on the zero polynomial."""
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(i + j for i, j in self._terms)

    def degree_in(self, var: str) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        k = 0 if var == "x" else 1
        return max(e[k] for e in self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return _raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return _raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x, y) -> Fraction:
        """Exact evaluation at rational (x, y); negative exponents need x,y != 0."""
        x = Fraction(x)
        y = Fraction(y)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x ** i * y ** j
        return total

    def eval_float(self, x: float, y: float) -> float:
        return sum(float(c) * x ** i * y ** j for (i, j), c in self._terms.items())

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for e in sorted(self._terms, key=_grlex_key, reverse=True):
            c = self._terms[e]
            mono = _monomial_str(e)
            if mono == "1":
                body = _frac_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_frac_str(abs(c))}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def _raw(terms: dict[Exponent, Fraction]) -> LaurentPoly:
    p = LaurentPoly.__new__(LaurentPoly)
    p._terms = terms
    p._hash = None
    return p


def _coerce(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly.const(value)
    return NotImplemented


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial_str(e: Exponent) -> str:
    i, j = e
    out = []
    if i == 1:
        out.append("x")
    elif i:
        out.append(f"x^{i}")
    if j == 1:
        out.append("y")
    elif j:
        out.append(f"y^{j}")
    return "*".join(out) if out else "1"


ZERO = _raw({})
ONE = LaurentPoly.const(1)
X = LaurentPoly.monomial(1, 0)
Y = LaurentPoly.monomial(0, 1)


# ---------------------------------------------------------------------------
# Parser: +, -, *, ^, integers, fractions, parentheses, variables x and y.
# Grammar (EBNF):
#   expr    := term (('+' | '-') term)*
#   term    := factor ('*' factor)*
#   factor  := atom ('^' signed_int)?
#   atom    := number | 'x' | 'y' | '(' expr ')' | '-' factor
#   number  := int ('/' int)?
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            self.pos = start
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse_expr(self) -> LaurentPoly:
        result = self.parse_term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                result = result + self.parse_term()
            elif ch == "-":
                self.pos += 1
                result = result - self.parse_term()
            else:
                return result

    def parse_term(self) -> LaurentPoly:
        result = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> LaurentPoly:
        base = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "(":
                raise self.error("exponent must be an integer literal")
            n = self.parse_int()
            if self.peek() == "/":
                raise self.error("non-integer exponent")
            if n >= 0:
                return base ** n
            # Negative exponents are only meaningful for pure monomials.
            if len(base) != 1:
                raise self.error("negative exponent on a non-monomial")
            ((i, j), c) = next(base.items())
            if abs(c) != 1 and c ** n != Fraction(c) ** n:  # pragma: no cover
                raise self.error("cannot invert coefficient")
            return LaurentPoly.monomial(i * n, j * n, Fraction(c) ** n)
        return base

    def parse_atom(self) -> LaurentPoly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if ch == "-":
            self.pos += 1
            return -self.parse_factor()
        if ch == "+":
            self.pos += 1
            return self.parse_factor()
        if ch == "x":
            self.pos += 1
            return X
        if ch == "y":
            self.pos += 1
            return Y
        if ch.isdigit():
            num = self.parse_int()
            self.skip_ws()
            if self.peek() == "/":
                save = self.pos
                self.pos += 1
                try:
                    den = self.parse_int()
                except ParseError:
                    self.pos = save
                    return LaurentPoly.const(num)
                if den == 0:
                    raise self.error("zero denominator")
                return LaurentPoly.const(Fraction(num, den))
            return LaurentPoly.const(num)
        raise self.error("expected a number, variable, or parenthesis")


def parse(text: str) -> LaurentPoly:
    """Parse an expression in x and y into an exact polynomial.

    Round-trips through str(): parse(str(p)) == p.
    """
    parser = _Parser(text)
    result = parser.parse_expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.error("unexpected trailing input")
    return result


def poly_from_json(data) -> LaurentPoly:
    """Decode the JSON form: a list of [i, j, "num/den"] triples."""
    terms = []
    for entry in data:
        if len(entry) != 3:
            raise ValueError(f"bad term {entry!r}: expected [i, j, coeff]")
        i, j, c = entry
        terms.append(((int(i), int(j)), Fraction(str(c))))
    return LaurentPoly(terms)


def poly_to_json(p: LaurentPoly) -> list:
    return [[i, j, _frac_str(c)] for (i, j), c in sorted(p.items(), key=lambda t: _grlex_key(t[0]))]


# ---------------------------------------------------------------------------
# Calculus and structural operations
# ---------------------------------------------------------------------------


def partial(p: LaurentPoly, var: str) -> LaurentPoly:
    """Exact partial derivative with respect to 'x' or 'y'."""
    if var not in ("x", "y"):
        raise ValueError("var must be 'x' or 'y'")
    k = 0 if var == "x" else 1
    out: dict[Exponent, Fraction] = {}
    for (i, j), c in p.items():
        n = (i, j)[k]
        if n == 0:
            continue
        e = (i - 1, j) if k == 0 else (i, j - 1)
        out[e] = out.get(e, Fraction(0)) + c * n
    return LaurentPoly(out)


def jacobian_det(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """J(p, q) = p_x q_y - p_y q_x.  Inputs must be ordinary polynomials."""
    if not p.is_ordinary() or not q.is_ordinary():
        raise ValueError("jacobian_det requires ordinary polynomials (no negative exponents)")
    return partial(p, "x") * partial(q, "y") - partial(p, "y") * partial(q, "x")


def _monomial_shift(p: LaurentPoly, di: int, dj: int) -> LaurentPoly:
    return _raw({(i + di, j + dj): c for (i, j), c in p.items()})


def exact_divide(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Return t with t*d == p exactly, or raise NotDivisible.

    Implemented as multivariate division by the single divisor d under the
    graded-lex order; success iff the remainder is zero.  Divisibility is
    meant in the ordinary polynomial ring: Laurent inputs are cleared by one
    COMMON monomial factor (which leaves the quotient unchanged), so x is
    still not divisible by y.
    """
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p:
        return ZERO
    si = -min(0, *(i for i, _ in p.support()), *(i for i, _ in d.support()))
    sj = -min(0, *(j for _, j in p.support()), *(j for _, j in d.support()))
    pp = _monomial_shift(p, si, sj)
    dd = _monomial_shift(d, si, sj)

    lead = max(dd.support(), key=_grlex_key)
    lead_c = dd.coeff(*lead)
    quotient: dict[Exponent, Fraction] = {}
    remainder: dict[Exponent, Fraction] = {}
    work = dict(pp._terms)
    while work:
        e = max(work, key=_grlex_key)
        c = work.pop(e)
        qi, qj = e[0] - lead[0], e[1] - lead[1]
        if qi < 0 or qj < 0:
            remainder[e] = c
            continue
        factor = c / lead_c
        quotient[(qi, qj)] = quotient.get((qi, qj), Fraction(0)) + factor
        for (i, j), dc in dd._terms.items():
            if (i, j) == lead:
                continue  # the lead term is exactly the one just popped
            t = (i + qi, j + qj)
            s = work.get(t, Fraction(0)) - factor * dc
            if s:
                work[t] = s
            else:
                work.pop(t, None)
    if remainder:
        raise NotDivisible(_monomial_shift(_raw(remainder), -si, -sj))
    return _raw(quotient)


def highest_part(p: LaurentPoly) -> LaurentPoly:
    """Sum of the terms of maximal total degree (the top homogeneous part)."""
    if not p:
        raise ValueError("zero polynomial has no highest part")
    if not p.is_ordinary():
        raise ValueError("highest_part requires an ordinary polynomial")
    d = p.total_degree()
    return _raw({e: c for e, c in p.items() if e[0] + e[1] == d})


@dataclass(frozen=True)
class WeightedPart:
    """A weighted-homogeneous component: every term (i,j) has a*i + b*j == weight."""

    weight: int
    poly: LaurentPoly


def weighted_decomposition(p: LaurentPoly, weights: tuple[int, int]) -> list[WeightedPart]:
    """Split p into weighted-homogeneous parts, weights strictly increasing."""
    a, b = weights
    if (a, b) == (0, 0):
        raise ValueError("weights must not both be zero")
    buckets: dict[int, dict[Exponent, Fraction]] = {}
    for (i, j), c in p.items():
        w = a * i + b * j
        buckets.setdefault(w, {})[(i, j)] = c
    return [WeightedPart(w, _raw(buckets[w])) for w in sorted(buckets)]


def substitute_affine(p: LaurentPoly, matrix, shift=(0, 0)) -> LaurentPoly:
    """Exact composition p(M @ (x, y) + t) for a 2x2 rational matrix M.

    Requires an ordinary polynomial; powers of the two images are cached so
    the cost is linear in the degree for the power table plus one pass over
    the terms.
    """
    if not p.is_ordinary():
        raise ValueError("substitute_affine requires an ordinary polynomial")
    (m00, m01), (m10, m11) = matrix
    t0, t1 = shift
    gx = LaurentPoly({(1, 0): Fraction(m00), (0, 1): Fraction(m01), (0, 0): Fraction(t0)})
    gy = LaurentPoly({(1, 0): Fraction(m10), (0, 1): Fraction(m11), (0, 0): Fraction(t1)})
    if not p:
        return ZERO
    max_i = max(i for i, _ in p.support())
    max_j = max(j for _, j in p.support())
    px = _power_table(gx, max_i)
    py = _power_table(gy, max_j)
    total = ZERO
    for (i, j), c in p.items():
        total = total + LaurentPoly.const(c) * px[i] * py[j]
    return total


def _power_table(g: LaurentPoly, n: int) -> list[LaurentPoly]:
    table = [ONE]
    for _ in range(n):
        table.append(table[-1] * g)
    return table


def substitute_monomial(p: LaurentPoly, x_image: Exponent, y_image: Exponent) -> LaurentPoly:
    """Monomial substitution x -> u^a v^b, y -> u^c v^d (exponents may be negative).

    Exponents transform by the linear map; coefficients are untouched — this is
    the exact toric change of variables used for Newton-polygon analysis.
    """
    a, b = x_image
    c, d = y_image
    out: dict[Exponent, Fraction] = {}
    for (i, j), coef in p.items():
        e = (a * i + c * j, b * i + d * j)
        s = out.get(e, Fraction(0)) + coef
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return _raw(out)
