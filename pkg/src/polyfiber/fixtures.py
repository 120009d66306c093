"""Built-in fixtures, loaded from the frozen data files in polyfiber/data."""

from __future__ import annotations

import json
from importlib import resources

from .laurent import LaurentPoly, poly_from_json
from .matecheck import MateCertificate

BUILTIN_NAMES = (
    "broughton",
    "broughton-shifted",
    "degree7",
    "saddle",
    "circle",
    "quadlike",
    "newone6",
)


def _load(name: str) -> dict:
    if name not in BUILTIN_NAMES:
        raise KeyError(f"unknown builtin fixture {name!r}; available: {', '.join(BUILTIN_NAMES)}")
    text = resources.files("polyfiber.data").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def builtin_polynomial(name: str) -> LaurentPoly:
    data = _load(name)
    key = "p" if "p" in data else "polynomial"
    return poly_from_json(data[key])


def builtin_pair(name: str) -> tuple[LaurentPoly, LaurentPoly, MateCertificate]:
    data = _load(name)
    if "q" not in data or "certificate" not in data:
        raise KeyError(f"builtin {name!r} is not a certified pair")
    return (
        poly_from_json(data["p"]),
        poly_from_json(data["q"]),
        MateCertificate.from_json(data["certificate"]),
    )


def builtin_raw(name: str) -> dict:
    return _load(name)
