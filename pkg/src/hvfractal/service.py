"""FastAPI service exposing the pipeline stages.

Each endpoint takes the declarative run config in the request body; stages
that write artifacts also take an output directory on the service host.
Pipeline failures map to HTTP 422 with a machine-readable error category.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .config import RunConfig
from .errors import PipelineError
from .pipeline import run_all, run_analyze, run_attractor, run_solve, run_verify, with_seed

app = FastAPI(title="hvfractal", version=__version__)


class StageRequest(BaseModel):
    config: RunConfig
    out_dir: Optional[str] = None
    seed: Optional[int] = None

    def resolved(self) -> tuple[RunConfig, str]:
        cfg = with_seed(self.config, self.seed)
        return cfg, self.out_dir or cfg.output.directory


class StageResponse(BaseModel):
    stage: str
    report: dict


class ErrorPayload(BaseModel):
    category: str
    message: str
    details: dict = {}


@app.exception_handler(PipelineError)
async def pipeline_error_handler(_request, exc: PipelineError):
    details = {k: v for k, v in exc.details.items() if _jsonable(v)}
    payload = ErrorPayload(category=exc.category, message=str(exc), details=details)
    return JSONResponse(status_code=422, content=payload.model_dump())


def _jsonable(v) -> bool:
    try:
        import json

        json.dumps(v)
        return True
    except TypeError:
        return False


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/verify", response_model=StageResponse)
def verify(req: StageRequest):
    cfg, _ = req.resolved()
    return StageResponse(stage="verify", report=run_verify(cfg))


@app.post("/solve", response_model=StageResponse)
def solve(req: StageRequest):
    cfg, out = req.resolved()
    run_verify(cfg)
    return StageResponse(stage="solve", report=run_solve(cfg, out))


@app.post("/attractor", response_model=StageResponse)
def attractor(req: StageRequest):
    cfg, out = req.resolved()
    run_verify(cfg)
    return StageResponse(stage="attractor", report=run_attractor(cfg, out))


@app.post("/analyze", response_model=StageResponse)
def analyze(req: StageRequest):
    cfg, out = req.resolved()
    return StageResponse(stage="analyze", report=run_analyze(cfg, out))


@app.post("/run", response_model=StageResponse)
def run(req: StageRequest):
    cfg, out = req.resolved()
    return StageResponse(stage="all", report=run_all(cfg, out))
