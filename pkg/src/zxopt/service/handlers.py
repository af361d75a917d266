"""Service operations, shared by the HTTP routes and the CLI client.

Each handler takes a request model and returns a response model.
Domain errors surface as :class:`HandlerError` with a stable code so
both front ends can map them uniformly (HTTP 400 / CLI exit 2).
"""

from __future__ import annotations

from .. import (
    Diagram,
    IllFormedError,
    QasmError,
    TooLargeError,
    VerificationFailed,
    emit_qasm,
    equal_up_to_scalar,
    evaluate,
    optimize,
    parse_qasm,
    simplify,
    to_diagram,
    validate_catalog,
)
from ..rules import catalog
from . import models


class HandlerError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _load_diagram(model: models.DiagramModel) -> Diagram:
    try:
        return Diagram.from_json_dict(model.model_dump())
    except IllFormedError as exc:
        raise HandlerError("ill-formed", str(exc))


def _dump_diagram(d: Diagram) -> models.DiagramModel:
    return models.DiagramModel.model_validate(d.to_json_dict())


def _load_source(src: models.SourceModel) -> Diagram:
    if src.qasm is not None:
        try:
            return to_diagram(parse_qasm(src.qasm))
        except QasmError as exc:
            raise HandlerError("qasm", str(exc))
    assert src.diagram is not None
    return _load_diagram(src.diagram)


def handle_eval(req: models.EvalRequest) -> models.EvalResponse:
    d = _load_diagram(req.diagram)
    try:
        matrix = evaluate(d, max_legs=req.max_legs)
    except TooLargeError as exc:
        raise HandlerError("too-large", str(exc))
    rows, cols = matrix.shape
    payload = [
        [(float(entry.real), float(entry.imag)) for entry in row] for row in matrix
    ]
    return models.EvalResponse(rows=rows, cols=cols, matrix=payload)


def handle_simplify(req: models.SimplifyRequest) -> models.SimplifyResponse:
    d = _load_diagram(req.diagram)
    result, trace = simplify(d, req.strategy)
    trace_models = None
    if req.include_trace:
        trace_models = [
            models.TraceStepModel.model_validate(step.to_json()) for step in trace.steps
        ]
    return models.SimplifyResponse(
        diagram=_dump_diagram(result), steps=len(trace), trace=trace_models
    )


def handle_optimize(req: models.OptimizeRequest) -> models.OptimizeResponse:
    try:
        circuit = parse_qasm(req.qasm)
    except QasmError as exc:
        raise HandlerError("qasm", str(exc))
    try:
        result = optimize(circuit, verify=req.verify, tol=req.tolerance)
    except VerificationFailed as exc:  # pragma: no cover - internal bug guard
        raise HandlerError("verification-failed", str(exc))
    except TooLargeError as exc:
        raise HandlerError("too-large", str(exc))
    report = models.OptimizeReport(
        metrics_before=models.MetricsModel.model_validate(result.metrics_before.to_json()),
        metrics_after=models.MetricsModel.model_validate(result.metrics_after.to_json()),
        rewrite_steps=len(result.trace),
        verified=result.verified,
    )
    return models.OptimizeResponse(qasm=emit_qasm(result.circuit), report=report)


def handle_equal(req: models.EqualRequest) -> models.EqualResponse:
    da = _load_source(req.a)
    db = _load_source(req.b)
    try:
        ma = evaluate(da)
        mb = evaluate(db)
    except TooLargeError as exc:
        raise HandlerError("too-large", str(exc))
    if ma.shape != mb.shape:
        return models.EqualResponse(equal=False, scalar=None)
    if req.up_to_scalar:
        ok, c = equal_up_to_scalar(ma, mb, req.tolerance)
        scalar = (c.real, c.imag) if (ok and c is not None) else None
        return models.EqualResponse(equal=ok, scalar=scalar)
    import numpy as np

    ok = bool(np.allclose(ma, mb, atol=req.tolerance, rtol=0.0))
    return models.EqualResponse(equal=ok, scalar=(1.0, 0.0) if ok else None)


def handle_validate_rules(req: models.ValidateRulesRequest) -> models.ValidateRulesResponse:
    reports, ok = validate_catalog(req.trials, req.seed, req.tolerance)
    return models.ValidateRulesResponse(
        ok=ok,
        rules=[
            models.RuleReportModel(
                name=r.name,
                trials=r.trials,
                max_deviation=r.max_deviation,
                passed=r.passed,
            )
            for r in reports
        ],
    )


def handle_rules() -> list:
    return [
        models.RuleInfoModel(
            name=r.name,
            description=r.description,
            fragment=r.fragment,
            decreases_measure=r.decreases_measure,
            in_circuit_safe=r.in_circuit_safe,
        )
        for r in catalog()
    ]
