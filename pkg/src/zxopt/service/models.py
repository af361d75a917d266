"""Pydantic request/response models for the HTTP service.

These validate the wire format at the boundary; the core types own the
actual (de)serialisation.  Reports carry ``report_version`` 1 so tools
can pin the schema.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

REPORT_VERSION = 1


class ScalarModel(BaseModel):
    re: float
    im: float
    exact: bool = True


class VertexModel(BaseModel):
    id: int
    kind: Literal["Z", "X", "H", "B"]
    phase: Optional[Union[str, float]] = None


class EdgeModel(BaseModel):
    src: int
    dst: int
    mult: int = Field(default=1, ge=1)


class DiagramModel(BaseModel):
    """Diagram JSON format, version 1."""

    version: Literal[1] = 1
    scalar: ScalarModel
    vertices: List[VertexModel]
    edges: List[EdgeModel]
    inputs: List[int]
    outputs: List[int]


class SourceModel(BaseModel):
    """Either a QASM circuit or a diagram; exactly one must be set."""

    qasm: Optional[str] = None
    diagram: Optional[DiagramModel] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "SourceModel":
        if (self.qasm is None) == (self.diagram is None):
            raise ValueError("provide exactly one of 'qasm' or 'diagram'")
        return self


class EvalRequest(BaseModel):
    diagram: DiagramModel
    max_legs: int = Field(default=12, ge=0, le=16)


class EvalResponse(BaseModel):
    rows: int
    cols: int
    matrix: List[List[Tuple[float, float]]]  # row-major [re, im] pairs


class SimplifyRequest(BaseModel):
    diagram: DiagramModel
    strategy: Literal["full", "circuit-safe"] = "full"
    include_trace: bool = True


class TraceStepModel(BaseModel):
    rule: str
    vertices: dict
    scalar: Tuple[float, float]
    measure_before: List[int]
    measure_after: List[int]


class SimplifyResponse(BaseModel):
    diagram: DiagramModel
    steps: int
    trace: Optional[List[TraceStepModel]] = None


class MetricsModel(BaseModel):
    total_gates: int
    two_qubit: int
    t_count: int
    h_count: int
    generic_rotations: int


class OptimizeRequest(BaseModel):
    qasm: str
    verify: Optional[bool] = None
    tolerance: float = Field(default=1e-8, gt=0)


class OptimizeReport(BaseModel):
    report_version: int = REPORT_VERSION
    metrics_before: MetricsModel
    metrics_after: MetricsModel
    rewrite_steps: int
    verified: Optional[bool]


class OptimizeResponse(BaseModel):
    qasm: str
    report: OptimizeReport


class EqualRequest(BaseModel):
    a: SourceModel
    b: SourceModel
    up_to_scalar: bool = False
    tolerance: float = Field(default=1e-9, gt=0)


class EqualResponse(BaseModel):
    equal: bool
    scalar: Optional[Tuple[float, float]] = None


class ValidateRulesRequest(BaseModel):
    trials: int = Field(default=1000, ge=1)
    seed: int = 0
    tolerance: float = Field(default=1e-9, gt=0)


class RuleReportModel(BaseModel):
    name: str
    trials: int
    max_deviation: float
    passed: bool


class ValidateRulesResponse(BaseModel):
    report_version: int = REPORT_VERSION
    ok: bool
    rules: List[RuleReportModel]


class RuleInfoModel(BaseModel):
    name: str
    description: str
    fragment: str
    decreases_measure: bool
    in_circuit_safe: bool


class HealthResponse(BaseModel):
    status: str
    version: str
    report_version: int = REPORT_VERSION
