"""HTTP surface for the verification suites.

The app is deliberately thin: every endpoint validates a typed config
(unknown keys are rejected), calls into the suites module, and returns the
report as strict JSON.  Domain errors (bad parameters, grids, model slugs)
map to 400 so clients can distinguish configuration mistakes from tolerance
failures, which are ordinary 200 responses with "pass": false.

Run standalone with  uvicorn nhlab.service:app  — the bundled CLI mounts the
same app in-process instead of going over a socket.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from . import __version__
from .errors import NhlabError
from .reports import jsonable
from . import suites

CONFIG_FIELDS = ("model", "alpha", "beta", "z_re", "z_im", "n", "tol", "seed")


class RunConfig(BaseModel):
    """Suite configuration; field names mirror the CLI flags."""

    model_config = ConfigDict(extra="forbid", protected_namespaces=())

    model: str | None = None
    alpha: float = 1.0
    beta: float = 0.3
    z_re: float = 0.0
    z_im: float = 1.0
    n: int = 3
    tol: float | None = None
    seed: int = 0

    def as_config(self) -> dict:
        out = {k: getattr(self, k) for k in CONFIG_FIELDS}
        return {k: v for k, v in out.items() if v is not None}


class VerifyConfig(RunConfig):
    all: bool = False


class SweepConfig(RunConfig):
    kind: str = "beta"
    grid: list[float] | None = None


app = FastAPI(title="nhlab verification service", version=__version__)


@app.exception_handler(NhlabError)
async def _domain_error(request: Request, exc: NhlabError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__,
            "suites": list(suites.SUITE_NAMES)}


@app.post("/suites/{name}")
def run_suite(name: str, cfg: RunConfig) -> dict:
    return suites.run_suite(name, cfg.as_config()).to_dict()


@app.post("/verify")
def verify(cfg: VerifyConfig) -> dict:
    if not cfg.all and cfg.model is not None:
        return suites.verify_model(cfg.as_config()).to_dict()
    return suites.verify_all(cfg.as_config()).to_dict()


@app.post("/sweep")
def sweep(cfg: SweepConfig) -> dict:
    fieldnames, rows, report = suites.sweep_rows(cfg.kind, cfg.as_config(),
                                                 cfg.grid)
    return {
        "schema": 1,
        "kind": cfg.kind,
        "fieldnames": fieldnames,
        "rows": jsonable(rows),
        "report": report.to_dict(),
    }
