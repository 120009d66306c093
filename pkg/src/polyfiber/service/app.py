"""HTTP service wrapping the analysis pipelines.

Stateless: every request is a pure computation on the posted polynomial.
Run with: uvicorn polyfiber.service:app
"""

from __future__ import annotations

from typing import Any, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .. import __version__
from ..report import (
    InputError,
    PartialAnalysis,
    analyze,
    trace_report,
    verify_pair_report,
)

app = FastAPI(
    title="polyfiber",
    version=__version__,
    description="Exact fiber topology of real bivariate polynomials",
)

PolynomialSpec = Union[str, list]


class AnalyzeRequest(BaseModel):
    polynomial: PolynomialSpec = Field(
        description="expression in x,y, builtin:NAME, or a list of [i, j, coeff] terms"
    )
    probes: list[str] = Field(default_factory=list, description="rational probe values")
    grid: int = Field(default=512, ge=64)
    box: Optional[str] = Field(default=None, description="oracle box halfwidth (rational)")
    oracle: bool = Field(default=False, description="cross-check N against the numeric oracle")


class AnalyzeResponse(BaseModel):
    status: str  # "ok" | "inconclusive"
    reason: Optional[str] = None
    report: dict[str, Any]


class VerifyPairRequest(BaseModel):
    builtin: Optional[str] = Field(default=None, description="builtin pair name, e.g. degree7")
    p: Optional[list] = None
    q: Optional[list] = None
    certificate: Optional[dict] = None


class VerifyPairResponse(BaseModel):
    verified: bool
    report: dict[str, Any]


class TraceRequest(BaseModel):
    polynomial: PolynomialSpec
    levels: list[str]
    steps: int = Field(default=4000, ge=16, le=200000)
    tol: float = Field(default=1e-9, gt=0)


class TraceResponse(BaseModel):
    summary: dict[str, Any]
    svg: str
    csv: str


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze_endpoint(req: AnalyzeRequest) -> AnalyzeResponse:
    from fractions import Fraction

    try:
        report = analyze(
            req.polynomial,
            probes=[Fraction(v) for v in req.probes],
            grid=req.grid,
            box=Fraction(req.box) if req.box else None,
            oracle=req.oracle,
        )
        return AnalyzeResponse(status="ok", report=report)
    except PartialAnalysis as exc:
        return AnalyzeResponse(status="inconclusive", reason=exc.reason, report=exc.report)
    except InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/verify-pair", response_model=VerifyPairResponse)
def verify_pair_endpoint(req: VerifyPairRequest) -> VerifyPairResponse:
    if req.builtin:
        spec: Any = f"builtin:{req.builtin}"
    else:
        if req.p is None or req.q is None or req.certificate is None:
            raise HTTPException(status_code=400, detail="provide builtin or p, q and certificate")
        spec = {"p": req.p, "q": req.q, "certificate": req.certificate}
    try:
        report = verify_pair_report(spec)
    except InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return VerifyPairResponse(verified=bool(report.get("verified")), report=report)


@app.post("/trace", response_model=TraceResponse)
def trace_endpoint(req: TraceRequest) -> TraceResponse:
    from fractions import Fraction

    try:
        summary, svg, csv = trace_report(
            req.polynomial, [Fraction(v) for v in req.levels], steps=req.steps, tol=req.tol
        )
    except InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return TraceResponse(summary=summary, svg=svg, csv=csv)
