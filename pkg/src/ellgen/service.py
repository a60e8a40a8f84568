"""HTTP service exposing the genus engine and correspondence checker.

Thin FastAPI layer over the core package: requests and responses are pydantic
models mirroring the CLI job fields; every numeric payload is the same
canonical dict the CLI emits, so results are identical whether computed
in-process or over the wire.
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .emit import (
    chi_y_payload,
    euler_payload,
    genseries_payload,
    genus_payload,
    report_payload,
    selftest_payload,
    witten_payload,
)
from .errors import EllgenError, TruncationError
from .genera import (
    CISpec,
    chi_y_generating_series,
    chi_y_genus,
    elliptic_genus,
    elliptic_genus_generating_series,
    euler_generating_series,
    euler_number,
    ns_elliptic_genus,
    witten_genus,
    y_polynomial_coeffs,
)
from .lgside import LGParams, check_correspondence
from .selftest import run_selftest

app = FastAPI(
    title="ellgen",
    version=__version__,
    description=(
        "Exact elliptic genera of (virtual) complete intersections in projective "
        "space, with numeric Landau-Ginzburg orbifold cross-checks."
    ),
)


def _guard(fn):
    try:
        return fn()
    except TruncationError as exc:
        raise HTTPException(
            status_code=400, detail={"type": "TruncationError", "message": str(exc)}
        )
    except EllgenError as exc:
        raise HTTPException(
            status_code=400, detail={"type": type(exc).__name__, "message": str(exc)}
        )


# ---------------------------------------------------------------------------
# request / response models
# ---------------------------------------------------------------------------


class SpecRequest(BaseModel):
    n: int = Field(ge=2, description="ambient projective space CP^(N-1)")
    degrees: list[int] = Field(min_length=1, description="degrees m_1..m_r")


class GenusRequest(SpecRequest):
    q_order: int = Field(default=8, ge=0, le=64)


class WittenRequest(SpecRequest):
    sigma_k: Literal[1, 2, 3]
    q_order: int = Field(default=8, ge=0, le=64)
    tau_re: float = 0.0
    tau_im: float = Field(default=1.5, gt=0)


class GenSeriesRequest(BaseModel):
    series_kind: Literal["euler", "chiy", "elliptic"]
    degrees: list[int] = Field(min_length=1)
    t_order: int = Field(default=8, ge=1, le=32)
    q_order: int = Field(default=8, ge=0, le=64)


class LGCheckRequest(SpecRequest):
    check_kind: Literal["elliptic", "ns", "sigma1", "sigma2", "sigma3"] = "elliptic"
    v_re: float = 0.0
    v_im: float = 0.0
    tau_re: float = 0.0
    tau_im: float = Field(default=1.5, gt=0)
    q_order: int = Field(default=16, ge=0, le=64)
    tol: float = Field(default=1e-6, gt=0)


class SpecOut(BaseModel):
    n: int
    degrees: list[int]


class PrefactorOut(BaseModel):
    i_pow: int
    q8_pow: int
    s_pow: int


class _Payload(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    schema_version: int = Field(alias="schema")
    kind: str


class EulerResponse(_Payload):
    spec: SpecOut
    value: str


class ChiYResponse(_Payload):
    spec: SpecOut
    coefficients: list[str]


class GenusResponse(_Payload):
    spec: SpecOut
    q_order: int
    u_order: int
    coefficients: list
    prefactor: PrefactorOut
    certificate: bool
    s_range: list[int]
    warnings: list[str]


class WittenResponse(_Payload):
    sigma_k: int
    spec: SpecOut
    q_order: int
    tau: list[float]
    value: list[float]
    exact_coefficients: list
    prefactor: PrefactorOut


class GenSeriesResponse(_Payload):
    series_kind: str
    degrees: list[int]
    t_order: int
    q_order: Optional[int]
    coefficients: list


class LGCheckResponse(_Payload):
    check_kind: str
    spec: SpecOut
    geometric_value: list[float]
    lg_value: list[float]
    abs_diff: float
    rel_diff: float
    q_order_used: int
    truncation_bound: float
    preconditions: list
    tol: float
    passed: bool


class SelftestResponse(_Payload):
    passed: bool
    checks: list


# ---------------------------------------------------------------------------
# endpoints
# ---------------------------------------------------------------------------


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


@app.post("/euler", response_model=EulerResponse)
def euler(req: SpecRequest):
    def work():
        spec = CISpec(req.n, req.degrees)
        return euler_payload(spec, euler_number(spec))

    return _guard(work)


@app.post("/chiy", response_model=ChiYResponse)
def chiy(req: SpecRequest):
    def work():
        spec = CISpec(req.n, req.degrees)
        return chi_y_payload(spec, y_polynomial_coeffs(chi_y_genus(spec)))

    return _guard(work)


@app.post("/ellgenus", response_model=GenusResponse)
def ellgenus(req: GenusRequest):
    def work():
        spec = CISpec(req.n, req.degrees)
        return genus_payload(elliptic_genus(spec, req.q_order))

    return _guard(work)


@app.post("/nsgenus", response_model=GenusResponse)
def nsgenus(req: GenusRequest):
    def work():
        import warnings as _w

        spec = CISpec(req.n, req.degrees)
        with _w.catch_warnings():
            _w.simplefilter("ignore")
            return genus_payload(ns_elliptic_genus(spec, req.q_order))

    return _guard(work)


@app.post("/witten", response_model=WittenResponse)
def witten(req: WittenRequest):
    def work():
        import warnings as _w

        spec = CISpec(req.n, req.degrees)
        tau = complex(req.tau_re, req.tau_im)
        with _w.catch_warnings():
            _w.simplefilter("ignore")
            return witten_payload(witten_genus(req.sigma_k, spec, req.q_order, tau))

    return _guard(work)


@app.post("/genseries", response_model=GenSeriesResponse)
def genseries(req: GenSeriesRequest):
    def work():
        if req.series_kind == "euler":
            series = euler_generating_series(req.degrees, req.t_order)
            q_order = None
        elif req.series_kind == "chiy":
            series = chi_y_generating_series(req.degrees, req.t_order)
            q_order = None
        else:
            series = elliptic_genus_generating_series(req.degrees, req.t_order, req.q_order)
            q_order = req.q_order
        return genseries_payload(req.series_kind, req.degrees, series, q_order)

    return _guard(work)


@app.post("/lgcheck", response_model=LGCheckResponse)
def lgcheck(req: LGCheckRequest):
    def work():
        import warnings as _w

        spec = CISpec(req.n, req.degrees)
        params = LGParams(
            v=complex(req.v_re, req.v_im), tau=complex(req.tau_re, req.tau_im), tol=req.tol
        )
        with _w.catch_warnings():
            _w.simplefilter("ignore")
            report = check_correspondence(spec, params, req.q_order, req.check_kind)
        return report_payload(report, req.tol)

    return _guard(work)


@app.post("/selftest", response_model=SelftestResponse)
def selftest():
    return selftest_payload(run_selftest())
