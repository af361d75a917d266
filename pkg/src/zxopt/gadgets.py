"""Parity-phase-polynomial intermediate form for CNOT+RZ blocks.

A run of CNOT and Z-rotation gates acts as a set of phase gadgets: each
rotation applies e^{i*alpha} on the parity its wire carries at that
point, and the CNOTs realise an invertible linear map over GF(2).
``to_gadget_form`` tracks parities forward through each run, summing
phases on equal parities and dropping zero sums; this merging is
exactly gadget cancellation.  H, CZ and SWAP close a block and are kept
as interleavers; RX enters the polynomial as H RZ H.

``resynthesize`` rebuilds each block as CNOT-ladder/RZ/mirrored-ladder
per gadget (onto the lowest-index wire of the parity) followed by a
Gauss-Jordan CNOT realisation of the block's linear map, reproducing
the block's unitary exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple, Union

from .circuit import Circuit, Gate, GateKind
from .phase import Phase


@dataclass
class PhaseBlock:
    """Gadgets (parity bitmask over block-entry wires, phase) plus the
    block's linear output map: ``linear[w]`` is the bitmask of entry
    wires whose parity wire w carries at block exit."""

    gadgets: List[Tuple[int, Phase]] = field(default_factory=list)
    linear: List[int] = field(default_factory=list)

    def is_trivial(self, width: int) -> bool:
        return not self.gadgets and self.linear == [1 << i for i in range(width)]


@dataclass
class Interleaver:
    gates: List[Gate] = field(default_factory=list)


@dataclass
class GadgetForm:
    width: int
    blocks: List[Union[PhaseBlock, Interleaver]] = field(default_factory=list)
    exit_perm: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.exit_perm:
            self.exit_perm = list(range(self.width))

    def phase_blocks(self) -> List[PhaseBlock]:
        return [b for b in self.blocks if isinstance(b, PhaseBlock)]

    def t_count(self) -> int:
        return sum(
            1
            for b in self.phase_blocks()
            for _, phase in b.gadgets
            if phase.is_odd_quarter()
        )


_INTERLEAVER_KINDS = {GateKind.H, GateKind.CZ, GateKind.SWAP}


def to_gadget_form(c: Circuit) -> GadgetForm:
    """Forward parity tracking over maximal CNOT+rotation runs.

    Equal parities within a block merge with summed phases and zero
    phases are dropped, so opposite-angle gadget pairs vanish here.
    """
    n = c.width
    form = GadgetForm(n)

    # RX enters the polynomial as H RZ H
    flat: List[Gate] = []
    for g in c.gates:
        rot = g.rotation()
        if rot is not None and rot[0] is GateKind.RX:
            q = g.qubits
            flat.append(Gate(GateKind.H, q))
            flat.append(Gate(GateKind.RZ, q, rot[1]))
            flat.append(Gate(GateKind.H, q))
        else:
            flat.append(g)

    linear = [1 << i for i in range(n)]
    acc: dict = {}
    block_dirty = False

    def close_block() -> None:
        nonlocal linear, acc, block_dirty
        if not block_dirty:
            return
        gadgets = [
            (parity, phase)
            for parity, phase in sorted(acc.items())
            if not phase.is_zero()
        ]
        form.blocks.append(PhaseBlock(gadgets, linear))
        linear = [1 << i for i in range(n)]
        acc = {}
        block_dirty = False

    for g in flat:
        if g.kind in _INTERLEAVER_KINDS:
            close_block()
            if form.blocks and isinstance(form.blocks[-1], Interleaver):
                form.blocks[-1].gates.append(g)
            else:
                form.blocks.append(Interleaver([g]))
            continue
        block_dirty = True
        if g.kind is GateKind.CNOT:
            ctrl, tgt = g.qubits
            linear[tgt] ^= linear[ctrl]
            continue
        rot = g.rotation()
        assert rot is not None and rot[0] is GateKind.RZ
        parity = linear[g.qubits[0]]
        if parity in acc:
            acc[parity] = acc[parity] + rot[1]
        else:
            acc[parity] = rot[1]
    close_block()
    return form


def _synth_linear(linear: List[int], width: int) -> List[Gate]:
    """CNOT sequence whose parity action equals ``linear`` (Gauss-Jordan)."""
    m = list(linear)
    ops: List[Tuple[int, int]] = []  # row ops applied while reducing m to I

    def add_row(src: int, dst: int) -> None:
        m[dst] ^= m[src]
        ops.append((src, dst))

    for col in range(width):
        bit = 1 << col
        pivot = next((r for r in range(col, width) if m[r] & bit), None)
        if pivot is None:
            raise ValueError("linear map is singular; not a CNOT circuit action")
        if pivot != col:
            # swap rows col and pivot with three xors
            add_row(pivot, col)
            add_row(col, pivot)
            add_row(pivot, col)
        for r in range(width):
            if r != col and m[r] & bit:
                add_row(col, r)
    # reduction ops F_1..F_k satisfy F_k ... F_1 L = I, so the gate list
    # realising L is the reversed op sequence
    return [Gate(GateKind.CNOT, (src, dst)) for src, dst in reversed(ops)]


def resynthesize(g: GadgetForm) -> Circuit:
    """Rebuild gates: ladder/RZ/mirror per gadget, then the linear map."""
    out = Circuit(g.width)
    for block in g.blocks:
        if isinstance(block, Interleaver):
            for gate in block.gates:
                out.add(gate)
            continue
        for parity, phase in block.gadgets:
            wires = [w for w in range(g.width) if parity & (1 << w)]
            target = wires[0]
            ladder = [Gate(GateKind.CNOT, (w, target)) for w in wires[1:]]
            for gate in ladder:
                out.add(gate)
            out.add(Gate(GateKind.RZ, (target,), phase))
            for gate in reversed(ladder):
                out.add(gate)
        if block.linear != [1 << i for i in range(g.width)]:
            for gate in _synth_linear(block.linear, g.width):
                out.add(gate)
    perm = list(g.exit_perm)
    for i in range(g.width):
        if perm[i] != i:
            j = perm.index(i)
            out.add(Gate(GateKind.SWAP, (min(i, j), max(i, j))))
            perm[i], perm[j] = perm[j], perm[i]
    return out
