"""Deterministic matching, rewriting and terminating simplification.

The engine applies directed rules from the catalogue until none fires.
Termination rests on a lexicographic measure

    (non-boundary vertex count, total edge multiplicity, pi-flags)

where the pi-flag component counts pi-phase spiders not yet adjacent to
an output; every rule in an automatic strategy strictly decreases it.
Matches are enumerated in a canonical order (ascending sorted mapped
vertex ids) and the first one fires, so identical inputs always produce
identical traces.  Vertex ids are never reused within a run, which is
what lets a recorded trace be replayed bit-exactly.

The ``full`` strategy applies every measure-decreasing rule in its
maximal form; the gate-form-restricted variants (wire fusion, the
CNOT-pair cancellation) are subsumed by fusion/hopf there and appear
only in ``circuit-safe``, which restricts to rules that keep a
circuit-shaped diagram extractable.

Confluence is not claimed anywhere: two strategies may reach different
normal forms, equal only up to semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .diagram import Diagram, VertexKind
from .rules import Match, RewriteRule, rule_by_name

FULL_STRATEGY = (
    "scalar-spider",
    "self-loop",
    "fusion",
    "identity-removal",
    "hh-cancel",
    "hopf",
    "copy",
    "gadget-cancel",
    "pi-commute",
)

CIRCUIT_SAFE_STRATEGY = (
    "fusion-wire",
    "identity-removal",
    "hh-cancel",
    "cnot-cancel",
    "gadget-cancel",
)

STRATEGIES: Dict[str, Tuple[str, ...]] = {
    "full": FULL_STRATEGY,
    "circuit-safe": CIRCUIT_SAFE_STRATEGY,
}


class StaleMatchError(Exception):
    """The diagram changed since this match was found."""


@dataclass(frozen=True)
class TraceStep:
    rule: str
    vertices: Tuple[Tuple[str, int], ...]
    scalar_factor: complex
    measure_before: Tuple[int, int, int]
    measure_after: Tuple[int, int, int]

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "vertices": dict(self.vertices),
            "scalar": [self.scalar_factor.real, self.scalar_factor.imag],
            "measure_before": list(self.measure_before),
            "measure_after": list(self.measure_after),
        }


@dataclass
class RewriteTrace:
    steps: List[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]


def measure(d: Diagram) -> Tuple[int, int, int]:
    """The termination measure: (vertices, edge multiplicity, pi-flags)."""
    vertices = sum(1 for v in d.vertex_ids() if d.kind(v) is not VertexKind.B)
    edge_mult = sum(m for _, _, m in d.edges())
    out_adjacent = set()
    for b in d.outputs:
        out_adjacent.update(d.neighbors(b))
    pi_flags = sum(
        1
        for v in d.vertex_ids()
        if d.kind(v).is_spider()
        and d.vertex(v).phase is not None
        and d.phase(v).is_exact
        and d.phase(v).is_pi()
        and v not in out_adjacent
    )
    return (vertices, edge_mult, pi_flags)


def find_matches(rule: RewriteRule, d: Diagram) -> List[Match]:
    """All occurrences of a rule in canonical order, overlaps included."""
    return rule.matches(d)


def _revalidate(rule: RewriteRule, match: Match, d: Diagram) -> None:
    for m in rule.matches(d):
        if m.vertices == match.vertices and m.phases == match.phases:
            return
    raise StaleMatchError(
        f"match for {rule.name!r} on vertices {sorted(match.vertices.values())} "
        "is no longer valid"
    )


def apply(match: Match, d: Diagram) -> Diagram:
    """Apply one validated match, returning a new diagram.

    The input is untouched; the result's scalar already carries the
    rule's factor, so evaluation is preserved exactly.
    """
    rule = rule_by_name(match.rule)
    _revalidate(rule, match, d)
    out = d.copy()
    factor = rule.rewriter(out, match)
    out.scalar = out.scalar.mul(factor)
    out.check_validity()
    return out


def simplify(d: Diagram, strategy: str = "full") -> Tuple[Diagram, RewriteTrace]:
    """Rewrite with the strategy's rules until none applies.

    At each step the strategy's rules are tried in order and the first
    canonical match of the first matching rule fires.  Every applied
    rule strictly decreases the measure, so this terminates; the bound
    is checked defensively.
    """
    try:
        rule_names = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {sorted(STRATEGIES)}")
    rules = [rule_by_name(name) for name in rule_names]
    work = d.copy()
    trace = RewriteTrace()
    v0, e0, p0 = measure(work)
    step_bound = (v0 + 1) * (e0 + 1) * (p0 + 1)
    while True:
        fired = False
        for rule in rules:
            ms = rule.matches(work)
            if not ms:
                continue
            m = ms[0]
            before = measure(work)
            factor = rule.rewriter(work, m)
            work.scalar = work.scalar.mul(factor)
            after = measure(work)
            if not after < before:
                raise RuntimeError(
                    f"rule {rule.name!r} did not decrease the measure: {before} -> {after}"
                )
            trace.steps.append(
                TraceStep(
                    rule=rule.name,
                    vertices=tuple(sorted(m.vertices.items())),
                    scalar_factor=complex(factor.value),
                    measure_before=before,
                    measure_after=after,
                )
            )
            fired = True
            break
        if not fired:
            break
        if len(trace) > step_bound:
            raise RuntimeError("simplify exceeded its measure-product step bound")
    work.check_validity()
    return work, trace


def replay(d: Diagram, trace: RewriteTrace) -> Diagram:
    """Re-apply a recorded trace to the diagram it was produced from.

    Ids are stable within a run, so replaying reproduces the final
    diagram bit-exactly for exact-phase rules.
    """
    work = d.copy()
    for step in trace.steps:
        rule = rule_by_name(step.rule)
        match = Match(rule=step.rule, vertices=dict(step.vertices))
        candidates = [m for m in rule.matches(work) if m.vertices == match.vertices]
        if not candidates:
            raise StaleMatchError(f"trace step {step.rule!r} no longer matches")
        factor = rule.rewriter(work, candidates[0])
        work.scalar = work.scalar.mul(factor)
    work.check_validity()
    return work
