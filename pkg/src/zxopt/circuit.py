"""Gate-level circuits, their spider translation, and extraction back.

Gate semantics use the phase-gate convention: ``RZ(a) = diag(1, e^{ia})``
and ``RX(a) = H RZ(a) H``, so S = RZ(pi/2), T = RZ(pi/4), and the Pauli
gates are RZ(pi)/RX(pi).  With the compensating scalar added for each
CNOT/CZ block, ``to_diagram`` evaluates to the exact unitary of the
circuit.

``from_gate_form`` inverts ``to_diagram`` on diagrams that stayed in
gate form: wires remain input-to-output chains, and every internal
vertex is a rotation, an H-box, or half of a CNOT/CZ.  The circuit-safe
rewrite strategy preserves this shape, which is what makes extraction
total by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .diagram import Diagram, VertexKind
from .phase import Phase

SQRT2 = math.sqrt(2.0)


class GateKind(str, Enum):
    H = "h"
    X = "x"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RZ = "rz"
    RX = "rx"
    CNOT = "cx"
    CZ = "cz"
    SWAP = "swap"


ONE_QUBIT = {
    GateKind.H, GateKind.X, GateKind.Z, GateKind.S, GateKind.SDG,
    GateKind.T, GateKind.TDG, GateKind.RZ, GateKind.RX,
}
PARAMETRIC = {GateKind.RZ, GateKind.RX}

# fixed-phase gates as (rotation axis, phase in pi-units)
_FIXED_ROTATION = {
    GateKind.Z: (GateKind.RZ, (1, 1)),
    GateKind.S: (GateKind.RZ, (1, 2)),
    GateKind.SDG: (GateKind.RZ, (-1, 2)),
    GateKind.T: (GateKind.RZ, (1, 4)),
    GateKind.TDG: (GateKind.RZ, (-1, 4)),
    GateKind.X: (GateKind.RX, (1, 1)),
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: Tuple[int, ...]
    phase: Optional[Phase] = None

    def __post_init__(self):
        expected = 1 if self.kind in ONE_QUBIT else 2
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind.value} takes {expected} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} operands must be distinct")
        if (self.phase is not None) != (self.kind in PARAMETRIC):
            raise ValueError(f"phase mismatch for {self.kind.value}")

    def rotation(self) -> Optional[Tuple[GateKind, Phase]]:
        """(axis, phase) for any phase-carrying gate, else None."""
        if self.kind in PARAMETRIC:
            assert self.phase is not None
            return self.kind, self.phase
        if self.kind in _FIXED_ROTATION:
            axis, (num, den) = _FIXED_ROTATION[self.kind]
            return axis, Phase.exact(num, den)
        return None


@dataclass
class Circuit:
    width: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be >= 0")
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        for q in g.qubits:
            if not 0 <= q < self.width:
                raise ValueError(f"qubit {q} out of range for width {self.width}")

    def add(self, g: Gate) -> None:
        self._check(g)
        self.gates.append(g)

    def copy(self) -> "Circuit":
        return Circuit(self.width, list(self.gates))

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Metrics:
    total_gates: int
    two_qubit: int
    t_count: int
    h_count: int
    generic_rotations: int

    def to_json(self) -> dict:
        return {
            "total_gates": self.total_gates,
            "two_qubit": self.two_qubit,
            "t_count": self.t_count,
            "h_count": self.h_count,
            "generic_rotations": self.generic_rotations,
        }

    def not_worse_than(self, other: "Metrics") -> bool:
        return (
            self.total_gates <= other.total_gates
            and self.two_qubit <= other.two_qubit
            and self.t_count <= other.t_count
            and self.h_count <= other.h_count
        )


def metrics(c: Circuit) -> Metrics:
    """Gate counts; the T-count counts phases that are odd multiples of pi/4.

    Numeric phases within 1e-9 of an odd multiple of pi/4 count toward
    the T-count; other numeric phases are reported separately as
    generic rotations.
    """
    two_qubit = t_count = h_count = generic = 0
    for g in c.gates:
        if g.kind is GateKind.H:
            h_count += 1
        elif g.kind in (GateKind.CNOT, GateKind.CZ, GateKind.SWAP):
            two_qubit += 1
        rot = g.rotation()
        if rot is not None:
            _, phase = rot
            if phase.is_odd_quarter():
                t_count += 1
            elif not phase.is_exact:
                generic += 1
    return Metrics(len(c.gates), two_qubit, t_count, h_count, generic)


# --------------------------------------------------------------------------
# circuit -> diagram


def to_diagram(c: Circuit) -> Diagram:
    """Translate gates to spiders; evaluates to the exact unitary.

    CNOT is the copy/merge spider pair on control/target, CZ the same
    with an H-box on the cross edge; each carries a compensating sqrt(2)
    in the scalar.  SWAP is pure rewiring (a boundary permutation).
    """
    d = Diagram()
    frontier: List[int] = []
    for _ in range(c.width):
        b = d.add_vertex(VertexKind.B)
        d.inputs.append(b)
        frontier.append(b)

    def extend(q: int, kind: VertexKind, phase: Optional[Phase]) -> int:
        v = d.add_vertex(kind, phase)
        d.add_edge(frontier[q], v)
        frontier[q] = v
        return v

    for g in c.gates:
        rot = g.rotation()
        if rot is not None:
            axis, phase = rot
            kind = VertexKind.Z if axis is GateKind.RZ else VertexKind.X
            extend(g.qubits[0], kind, phase)
        elif g.kind is GateKind.H:
            extend(g.qubits[0], VertexKind.H, None)
        elif g.kind is GateKind.CNOT:
            ctrl, tgt = g.qubits
            zc = extend(ctrl, VertexKind.Z, Phase.zero())
            xt = extend(tgt, VertexKind.X, Phase.zero())
            d.add_edge(zc, xt)
            d.scalar = d.scalar.times(SQRT2)
        elif g.kind is GateKind.CZ:
            a, b = g.qubits
            za = extend(a, VertexKind.Z, Phase.zero())
            zb = extend(b, VertexKind.Z, Phase.zero())
            h = d.add_vertex(VertexKind.H)
            d.add_edge(za, h)
            d.add_edge(h, zb)
            d.scalar = d.scalar.times(SQRT2)
        elif g.kind is GateKind.SWAP:
            a, b = g.qubits
            frontier[a], frontier[b] = frontier[b], frontier[a]
        else:  # pragma: no cover - all kinds handled
            raise ValueError(f"unhandled gate {g.kind}")

    for q in range(c.width):
        b = d.add_vertex(VertexKind.B)
        d.add_edge(frontier[q], b)
        d.outputs.append(b)
    d.check_validity()
    return d


# --------------------------------------------------------------------------
# gate-form diagram -> circuit (extraction by construction)


class ExtractionError(Exception):
    """The diagram left gate form; extraction is only total on gate form."""


def from_gate_form(d: Diagram) -> Circuit:
    """Read a circuit back off a gate-form diagram.

    Sweeps a frontier edge along every wire from its input boundary.
    Frontier edges are always wire edges, so anything reached through
    one is a gate: H-boxes and two-legged spiders emit immediately, and
    a three-legged spider emits once its far half sits at another
    wire's frontier (that rendezvous is what identifies its cross
    edge).  Wire crossings surface as a trailing SWAP network.
    """
    d.check_validity()
    if len(d.inputs) != len(d.outputs):
        raise ExtractionError("gate form needs equally many inputs and outputs")
    width = len(d.inputs)
    out_pos = {b: i for i, b in enumerate(d.outputs)}
    in_set = set(d.inputs)

    # frontier[q] = (last consumed vertex, vertex across the wire edge)
    frontier: List[Tuple[int, int]] = [(b, d.neighbors(b)[0]) for b in d.inputs]
    done = [False] * width
    ends: List[int] = [0] * width
    consumed: set = set()
    gates: List[Gate] = []

    def step_wire(q: int, via: int) -> None:
        prev, cur = frontier[q]
        nxt = [w for w in d.neighbors(cur) if w not in (prev, via)]
        if d.edge_mult(cur, prev) > 1 or d.loop_mult(cur):
            raise ExtractionError("doubled wire or self-loop in gate form")
        if len(nxt) != 1 or (via >= 0 and d.edge_mult(cur, via) != 1):
            raise ExtractionError("broken wire")
        consumed.add(cur)
        frontier[q] = (cur, nxt[0])

    def find_partner(q: int) -> Optional[Tuple[int, int, Optional[int]]]:
        """(wire, partner, h or None) for the 3-legged spider at q's frontier."""
        _, cur = frontier[q]
        hits = []
        for p in range(width):
            if p == q or done[p]:
                continue
            pc = frontier[p][1]
            if pc == cur:
                raise ExtractionError("wires merged: not gate form")
            if d.kind(pc) is VertexKind.B or not d.kind(pc).is_spider():
                continue
            if d.degree(pc) != 3 or d.loop_mult(pc):
                continue
            if d.kind(pc) is not d.kind(cur) and d.edge_mult(cur, pc) == 1:
                hits.append((p, pc, None))
            elif d.kind(pc) is VertexKind.Z and d.kind(cur) is VertexKind.Z:
                hs = [
                    h
                    for h in d.neighbors(cur)
                    if d.kind(h) is VertexKind.H and d.edge_mult(h, pc) == 1
                ]
                if hs:
                    hits.append((p, pc, hs[0]))
        if len(hits) > 1:
            raise ExtractionError("ambiguous two-qubit pairing: not gate form")
        return hits[0] if hits else None

    while not all(done):
        progress = False
        for q in range(width):
            if done[q]:
                continue
            while not done[q]:
                prev, cur = frontier[q]
                kind = d.kind(cur)
                if kind is VertexKind.B:
                    if cur in in_set:
                        raise ExtractionError("wire ran back into an input")
                    ends[q] = out_pos[cur]
                    done[q] = True
                    progress = True
                    break
                if kind is VertexKind.H:
                    gates.append(Gate(GateKind.H, (q,)))
                    step_wire(q, -1)
                    progress = True
                    continue
                if not kind.is_spider():
                    raise ExtractionError(f"unexpected {kind} on a wire")
                deg = d.degree(cur)
                if deg == 2:
                    phase = d.phase(cur)
                    if not phase.is_zero():
                        axis = GateKind.RZ if kind is VertexKind.Z else GateKind.RX
                        gates.append(Gate(axis, (q,), phase))
                    step_wire(q, -1)
                    progress = True
                    continue
                if deg != 3:
                    raise ExtractionError(f"degree-{deg} spider is not a gate")
                hit = find_partner(q)
                if hit is None:
                    break  # far half not at its frontier yet
                p, partner, h = hit
                if not d.phase(cur).is_zero() or not d.phase(partner).is_zero():
                    raise ExtractionError("phased spider inside a two-qubit gate")
                if h is not None:
                    gates.append(Gate(GateKind.CZ, (min(q, p), max(q, p))))
                    consumed.add(h)
                    step_wire(q, h)
                    step_wire(p, h)
                else:
                    ctrl, tgt = (q, p) if kind is VertexKind.Z else (p, q)
                    gates.append(Gate(GateKind.CNOT, (ctrl, tgt)))
                    cr = cur
                    step_wire(q, partner)
                    step_wire(p, cr)
                progress = True
        if not all(done) and not progress:
            raise ExtractionError("deadlock while pairing two-qubit gates")

    internal = {v for v in d.vertex_ids() if d.kind(v) is not VertexKind.B}
    if consumed != internal:
        raise ExtractionError("vertices not on any wire: not gate form")
    if sorted(ends) != list(range(width)):
        raise ExtractionError("wires do not reach distinct outputs")

    # trailing swap network realising the wire permutation
    cur_perm = list(ends)
    for i in range(width):
        if cur_perm[i] == i:
            continue
        j = cur_perm.index(i)
        gates.append(Gate(GateKind.SWAP, (min(i, j), max(i, j))))
        cur_perm[i], cur_perm[j] = cur_perm[j], cur_perm[i]
    return Circuit(width, gates)
