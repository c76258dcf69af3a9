"""FastAPI service exposing the command runner.

Every endpoint is a POST carrying a substitution spec (except /approx, which
only needs the numeric target); responses are the same Report envelope the
CLI prints.  Rejected inputs map to 422, internal failures to 500.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import RejectedInput
from .runner import RunOptions, run
from .schemas import (
    ApproxRequest,
    DeltaRequest,
    DiagnoseRequest,
    MeasureRequest,
    OracleRequest,
    Report,
    SpecEnvelope,
)

app = FastAPI(
    title="subrigid",
    version=__version__,
    description="Exact cylinder measures and partial rigidity rates of substitution subshifts.",
)


@app.exception_handler(RejectedInput)
async def _rejected(request: Request, exc: RejectedInput) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/healthz")
def healthz() -> dict[str, str]:
    return {"status": "ok", "version": __version__}


@app.post("/analyze", response_model=Report, response_model_exclude_none=True)
def analyze(request: SpecEnvelope) -> Report:
    return run("analyze", request.spec, RunOptions())


@app.post("/measure", response_model=Report, response_model_exclude_none=True)
def measure(request: MeasureRequest) -> Report:
    return run("measure", request.spec, RunOptions(word=request.word))


@app.post("/delta", response_model=Report, response_model_exclude_none=True)
def delta(request: DeltaRequest) -> Report:
    return run("delta", request.spec, RunOptions(max_length=request.max_length))


@app.post("/profile", response_model=Report, response_model_exclude_none=True)
def profile(request: DeltaRequest) -> Report:
    return run("profile", request.spec, RunOptions(max_length=request.max_length))


@app.post("/certify", response_model=Report, response_model_exclude_none=True)
def certify(request: SpecEnvelope) -> Report:
    return run("certify", request.spec, RunOptions())


@app.post("/diagnose", response_model=Report, response_model_exclude_none=True)
def diagnose(request: DiagnoseRequest) -> Report:
    return run("diagnose", request.spec, RunOptions(n=request.n))


@app.post("/approx", response_model=Report, response_model_exclude_none=True)
def approx(request: ApproxRequest) -> Report:
    return run("approx", None, RunOptions(delta=request.delta, eps=request.eps))


@app.post("/oracle", response_model=Report, response_model_exclude_none=True)
def oracle(request: OracleRequest) -> Report:
    return run("oracle", request.spec, RunOptions(word=request.word, depth=request.depth))
