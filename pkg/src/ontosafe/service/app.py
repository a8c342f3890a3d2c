"""FastAPI application: POST /closure, /check, /explain, /sanitize and
GET /health. Handler failures surface as 400 with {kind, message} detail."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import handlers
from .handlers import ServiceError
from .schemas import (
    CheckRequest,
    CheckResponse,
    ClosureRequest,
    ClosureResponse,
    ExplainRequest,
    ExplainResponse,
    HealthResponse,
    SanitizeRequest,
    SanitizeResponse,
)


def _run(handler, req):
    try:
        return handler(req)
    except ServiceError as exc:
        raise HTTPException(
            status_code=400, detail={"kind": exc.kind, "message": exc.message}
        ) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="ontosafe", version=__version__)

    @app.post("/closure", response_model=ClosureResponse)
    def closure_endpoint(req: ClosureRequest) -> ClosureResponse:
        return _run(handlers.handle_closure, req)

    @app.post("/check", response_model=CheckResponse)
    def check_endpoint(req: CheckRequest) -> CheckResponse:
        return _run(handlers.handle_check, req)

    @app.post("/explain", response_model=ExplainResponse)
    def explain_endpoint(req: ExplainRequest) -> ExplainResponse:
        return _run(handlers.handle_explain, req)

    @app.post("/sanitize", response_model=SanitizeResponse)
    def sanitize_endpoint(req: SanitizeRequest) -> SanitizeResponse:
        return _run(handlers.handle_sanitize, req)

    @app.get("/health", response_model=HealthResponse)
    def health_endpoint() -> HealthResponse:
        return HealthResponse(version=__version__)

    return app


app = create_app()
