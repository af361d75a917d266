"""FastAPI application wrapping the core package.

All endpoints are stateless POSTs over the pydantic models; the rule
catalogue is immutable after startup, so concurrent requests share it
freely.  Domain errors map to HTTP 400 with a stable error code.
"""

from __future__ import annotations

from typing import List

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import models
from .handlers import (
    HandlerError,
    handle_equal,
    handle_eval,
    handle_optimize,
    handle_rules,
    handle_simplify,
    handle_validate_rules,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="zxopt",
        description="ZX-diagram evaluation, simplification and verified circuit optimisation",
        version=__version__,
    )

    def run(handler, *args):
        try:
            return handler(*args)
        except HandlerError as exc:
            raise HTTPException(
                status_code=400, detail={"code": exc.code, "message": exc.message}
            )

    @app.get("/health", response_model=models.HealthResponse)
    def health() -> models.HealthResponse:
        return models.HealthResponse(status="ok", version=__version__)

    @app.get("/rules", response_model=List[models.RuleInfoModel])
    def rules() -> List[models.RuleInfoModel]:
        return handle_rules()

    @app.post("/eval", response_model=models.EvalResponse)
    def eval_diagram(req: models.EvalRequest) -> models.EvalResponse:
        return run(handle_eval, req)

    @app.post("/simplify", response_model=models.SimplifyResponse)
    def simplify_diagram(req: models.SimplifyRequest) -> models.SimplifyResponse:
        return run(handle_simplify, req)

    @app.post("/optimize", response_model=models.OptimizeResponse)
    def optimize_circuit(req: models.OptimizeRequest) -> models.OptimizeResponse:
        return run(handle_optimize, req)

    @app.post("/equal", response_model=models.EqualResponse)
    def equal(req: models.EqualRequest) -> models.EqualResponse:
        return run(handle_equal, req)

    @app.post("/validate-rules", response_model=models.ValidateRulesResponse)
    def validate_rules(req: models.ValidateRulesRequest) -> models.ValidateRulesResponse:
        return run(handle_validate_rules, req)

    return app


app = create_app()
