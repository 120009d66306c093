from __future__ import annotations

import random
from fractions import Fraction

import pytest

from polyfiber.laurent import LaurentPoly, parse


@pytest.fixture
def broughton():
    return parse("x*(1+x*y)")


@pytest.fixture
def broughton_shifted():
    return parse("1+x+y+x^2*y+2*x*y^2+y^3")


@pytest.fixture
def degree7_p():
    return parse("(1+x+x^2*y)*(1+y+2*x*y+x^2*y^2)")


@pytest.fixture
def newone6():
    return parse("(x^2+3*y)*(x-y^2)^2 + (x-y^2)*(y^2+2) + 1")


def random_poly(rng: random.Random, max_deg: int = 4, n_terms: int = 5, laurent: bool = False) -> LaurentPoly:
    lo = -max_deg if laurent else 0
    terms = {}
    for _ in range(n_terms):
        i = rng.randint(lo, max_deg)
        j = rng.randint(lo, max_deg)
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if c:
            terms[(i, j)] = terms.get((i, j), Fraction(0)) + c
    return LaurentPoly(terms)
