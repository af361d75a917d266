"""zxopt: ZX-diagram rewriting and verified quantum circuit optimisation.

The core value types are :class:`Phase`, :class:`Scalar` and
:class:`Diagram`; ``evaluate`` is the exact tensor oracle everything
else is checked against.  ``catalog`` holds the rewrite rules,
``simplify`` the terminating strategies, and the circuit front end
round-trips OpenQASM through the optimiser with machine-checked
equivalence.
"""

from .phase import Phase
from .scalar import Scalar
from .diagram import (
    Diagram,
    IllFormedError,
    VertexKind,
    adjoint,
    canonical_hash,
    compose_par,
    compose_seq,
    hadamard,
    identity,
    spider,
)
from .semantics import (
    TooLargeError,
    equal_up_to_scalar,
    evaluate,
    spider_matrix,
)
from .rules import (
    Match,
    RewriteRule,
    RuleReport,
    SoundnessViolation,
    catalog,
    recolor_triple,
    rule_by_name,
    validate_catalog,
    validate_rule_soundness,
)
from .engine import (
    CIRCUIT_SAFE_STRATEGY,
    FULL_STRATEGY,
    RewriteTrace,
    StaleMatchError,
    TraceStep,
    apply,
    find_matches,
    measure,
    replay,
    simplify,
)
from .circuit import (
    Circuit,
    ExtractionError,
    Gate,
    GateKind,
    Metrics,
    from_gate_form,
    metrics,
    to_diagram,
)
from .qasm import (
    QasmError,
    QasmSyntaxError,
    UnsupportedGateError,
    emit_qasm,
    parse_qasm,
)
from .gadgets import GadgetForm, Interleaver, PhaseBlock, resynthesize, to_gadget_form
from .optimize import (
    OptimizeResult,
    VerificationFailed,
    optimize,
    peephole,
    verify_equiv,
)

__version__ = "0.1.0"

__all__ = [
    "Phase", "Scalar", "Diagram", "VertexKind", "IllFormedError",
    "identity", "spider", "hadamard", "compose_seq", "compose_par",
    "adjoint", "canonical_hash",
    "evaluate", "spider_matrix", "equal_up_to_scalar", "TooLargeError",
    "Match", "RewriteRule", "RuleReport", "SoundnessViolation",
    "catalog", "rule_by_name", "recolor_triple",
    "validate_rule_soundness", "validate_catalog",
    "find_matches", "apply", "simplify", "measure", "replay",
    "RewriteTrace", "TraceStep", "StaleMatchError",
    "FULL_STRATEGY", "CIRCUIT_SAFE_STRATEGY",
    "Circuit", "Gate", "GateKind", "Metrics", "metrics",
    "to_diagram", "from_gate_form", "ExtractionError",
    "parse_qasm", "emit_qasm", "QasmError", "QasmSyntaxError",
    "UnsupportedGateError",
    "GadgetForm", "PhaseBlock", "Interleaver", "to_gadget_form",
    "resynthesize",
    "optimize", "peephole", "verify_equiv", "OptimizeResult",
    "VerificationFailed",
    "__version__",
]
