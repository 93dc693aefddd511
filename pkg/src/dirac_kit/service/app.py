"""FastAPI service wrapping the verification core.

Endpoints:
    GET  /health            liveness and version
    GET  /catalog           names of the prebuilt verification suites
    POST /catalog/{name}    run one suite with optional settings
    POST /verify            run a scenario document
Scenario validation errors map to 400 so clients can distinguish bad input
(exit code 2) from failed checks (exit code 1, reported in the body).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..scenarios import (CATALOG_COMMANDS, ScenarioError, run_catalog,
                         run_scenario)
from .models import (CatalogListing, CatalogRequest, HealthResponse,
                     ReportModel, VerifyRequest)

app = FastAPI(title="dirac-kit", version=__version__,
              description="Verification suites for Dirac structures, Courant "
                          "algebroids and multiplicative moment maps.")


@app.get("/health", response_model=HealthResponse)
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/catalog", response_model=CatalogListing)
def catalog_listing() -> dict:
    return {"names": sorted(CATALOG_COMMANDS)}


@app.post("/catalog/{name}", response_model=ReportModel)
def catalog_run(name: str, request: CatalogRequest) -> dict:
    try:
        return run_catalog(name, request.settings.overrides())
    except ScenarioError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc


@app.post("/verify", response_model=ReportModel)
def verify(request: VerifyRequest) -> dict:
    try:
        doc = request.scenario.to_document()
        return run_scenario(doc, request.settings.overrides())
    except ScenarioError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
