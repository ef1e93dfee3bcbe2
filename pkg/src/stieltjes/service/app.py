"""FastAPI application wrapping the computation package.

The expensive tabulation step runs as a background job with polling;
everything else answers synchronously.  Package exceptions map to HTTP
statuses: domain and format problems are client errors, capacity means
the request is mathematically out of reach at the given precision, and
corruption reports the flagged node ranges in the response body.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from ..errors import CapacityError, CorruptionError, DomainError, FormatError
from . import handlers, schemas
from .jobs import JobRegistry


def create_app() -> FastAPI:
    app = FastAPI(title="stieltjes", version=handlers.health().version)
    jobs = JobRegistry()

    @app.exception_handler(DomainError)
    async def _domain(_, exc: DomainError):
        return JSONResponse(status_code=422, content={"error": str(exc), "class": "DomainError"})

    @app.exception_handler(FormatError)
    async def _format(_, exc: FormatError):
        return JSONResponse(status_code=400, content={"error": str(exc), "class": "FormatError"})

    @app.exception_handler(CapacityError)
    async def _capacity(_, exc: CapacityError):
        return JSONResponse(status_code=409, content={"error": str(exc), "class": "CapacityError"})

    @app.exception_handler(CorruptionError)
    async def _corruption(_, exc: CorruptionError):
        return JSONResponse(
            status_code=409,
            content={"error": str(exc), "class": "CorruptionError", "flagged": exc.flagged},
        )

    @app.exception_handler(FileNotFoundError)
    async def _missing(_, exc: FileNotFoundError):
        return JSONResponse(status_code=404, content={"error": str(exc), "class": "FileNotFoundError"})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return handlers.health()

    @app.post("/zeta", response_model=schemas.ValueResponse)
    def zeta(req: schemas.ZetaRequest) -> schemas.ValueResponse:
        return handlers.handle_zeta(req)

    @app.post("/f-reg", response_model=schemas.ValueResponse)
    def f_reg(req: schemas.FRegRequest) -> schemas.ValueResponse:
        return handlers.handle_f_reg(req)

    @app.post("/tables/tabulate", response_model=schemas.JobAccepted, status_code=202)
    def tabulate(req: schemas.TabulateRequest) -> schemas.JobAccepted:
        return schemas.JobAccepted(job_id=jobs.submit(req))

    @app.get("/jobs/{job_id}", response_model=schemas.JobStatus)
    def job_status(job_id: str) -> schemas.JobStatus:
        status = jobs.get(job_id)
        if status is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        return status

    @app.post("/tables/scan", response_model=schemas.ScanResponse)
    def scan(req: schemas.ScanRequest) -> schemas.ScanResponse:
        return handlers.handle_scan(req)

    @app.post("/alphas", response_model=schemas.AlphasResponse)
    def alphas(req: schemas.AlphasRequest) -> schemas.AlphasResponse:
        return handlers.handle_alphas(req)

    @app.post("/gamma", response_model=schemas.GammaResponse)
    def gamma(req: schemas.GammaRequest) -> schemas.GammaResponse:
        return handlers.handle_gamma(req)

    @app.post("/ak", response_model=schemas.AkResponse)
    def ak(req: schemas.AkRequest) -> schemas.AkResponse:
        return handlers.handle_ak(req)

    @app.post("/verify/identities", response_model=schemas.IdentitiesResponse)
    def identities(req: schemas.IdentitiesRequest) -> schemas.IdentitiesResponse:
        return handlers.handle_identities(req)

    @app.post("/verify/cross-zeta", response_model=schemas.CrossZetaResponse)
    def cross_zeta(req: schemas.CrossZetaRequest) -> schemas.CrossZetaResponse:
        return handlers.handle_cross_zeta(req)

    return app
