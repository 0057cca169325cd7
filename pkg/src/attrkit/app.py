"""HTTP service exposing the toolkit; run with `uvicorn attrkit.app:app`."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import service
from .geometry import GeometryError, IngestError
from .pushforward import LiftMismatch, MissingLiftError
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    CatalogRequest,
    CatalogResponse,
    CheckRequest,
    CheckResponse,
    ClosureRequest,
    ClosureResponse,
    MinimizeRequest,
    MinimizeResponse,
    PresetsResponse,
    PushRequest,
    PushResponse,
    SurfaceBoundsRequest,
    SurfaceBoundsResponse,
)

app = FastAPI(
    title="attrkit",
    description="Attractor-set membership and Chern-character bounds on threefold data",
    version="0.1.0",
)

_INPUT_ERRORS = (IngestError, GeometryError, MissingLiftError, LiftMismatch, ValueError, KeyError)


def _guard(fn, req):
    try:
        return fn(req)
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/presets", response_model=PresetsResponse)
def presets() -> PresetsResponse:
    return service.run_presets()


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest) -> CheckResponse:
    return _guard(service.run_check, req)


@app.post("/minimize", response_model=MinimizeResponse)
def minimize(req: MinimizeRequest) -> MinimizeResponse:
    return _guard(service.run_minimize, req)


@app.post("/catalog", response_model=CatalogResponse)
def catalog(req: CatalogRequest) -> CatalogResponse:
    return _guard(service.run_catalog, req)


@app.post("/closure", response_model=ClosureResponse)
def closure(req: ClosureRequest) -> ClosureResponse:
    return _guard(service.run_closure, req)


@app.post("/bounds", response_model=BoundsResponse)
def bounds(req: BoundsRequest) -> BoundsResponse:
    return _guard(service.run_bounds, req)


@app.post("/push", response_model=PushResponse)
def push(req: PushRequest) -> PushResponse:
    return _guard(service.run_push, req)


@app.post("/surface-bounds", response_model=SurfaceBoundsResponse)
def surface_bounds(req: SurfaceBoundsRequest) -> SurfaceBoundsResponse:
    return _guard(service.run_surface_bounds, req)
