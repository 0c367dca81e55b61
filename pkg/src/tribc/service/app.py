"""HTTP surface over the handlers; input errors map to 4xx responses."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import (
    DomainError,
    EnumerationCapError,
    PreconditionError,
    SchemaError,
)
from . import handlers
from . import models as m

app = FastAPI(
    title="tribc",
    description=(
        "Rate regions, state-dependent channel capacities and coset-code "
        "Monte Carlo for a three-user discrete broadcast channel"
    ),
)


@app.exception_handler(SchemaError)
async def _schema_error(request: Request, exc: SchemaError):
    return JSONResponse(status_code=422, content={"error": "schema", "detail": str(exc)})


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return JSONResponse(status_code=400, content={"error": "domain", "detail": str(exc)})


@app.exception_handler(PreconditionError)
async def _precondition_error(request: Request, exc: PreconditionError):
    return JSONResponse(
        status_code=400, content={"error": "precondition", "detail": str(exc)}
    )


@app.exception_handler(EnumerationCapError)
async def _cap_error(request: Request, exc: EnumerationCapError):
    return JSONResponse(status_code=413, content={"error": "cap", "detail": str(exc)})


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/entropy/quantity", response_model=m.EntropyResponse)
def entropy_quantity(req: m.EntropyRequest) -> m.EntropyResponse:
    return handlers.eval_entropy(req)


@app.post("/analysis/corollary1", response_model=m.Corollary1Response)
def corollary1(req: m.Corollary1Request) -> m.Corollary1Response:
    return handlers.corollary1(req)


@app.post("/analysis/corner", response_model=m.CornerPointResponse)
def corner(req: m.CornerPointRequest) -> m.CornerPointResponse:
    return handlers.corner_point(req)


@app.post("/gp/solve", response_model=m.GPResponse)
def gp_solve(req: m.GPRequest) -> m.GPResponse:
    return handlers.gp_solve(req)


@app.post("/gp/prop1", response_model=m.Prop1Response)
def gp_prop1(req: m.Prop1Request) -> m.Prop1Response:
    return handlers.prop1(req)


@app.post("/regions/membership", response_model=m.RegionResponse)
def region_membership(req: m.RegionRequest) -> m.RegionResponse:
    return handlers.region_membership(req)


@app.post("/regions/audit", response_model=m.AuditResponse)
def region_audit(req: m.AuditRequest) -> m.AuditResponse:
    return handlers.audit(req)


@app.post("/sim/run", response_model=m.SimResponse)
def sim_run(req: m.SimRequest) -> m.SimResponse:
    return handlers.simulate(req)


@app.post("/channels/example1", response_model=m.ChannelModel)
def channels_example1(req: m.Example1Request) -> m.ChannelModel:
    return handlers.example1_channel(req)
