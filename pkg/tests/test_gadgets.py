import random

import numpy as np

from zxopt import (
    Circuit,
    Gate,
    GateKind,
    Phase,
    PhaseBlock,
    resynthesize,
    to_gadget_form,
    verify_equiv,
)

from helpers import circuit_unitary, random_circuit


def test_single_gadget_from_cnot_conjugation():
    c = Circuit(2, [Gate(GateKind.CNOT, (0, 1)), Gate(GateKind.RZ, (1,), Phase.exact(1, 4)),
                    Gate(GateKind.CNOT, (0, 1))])
    form = to_gadget_form(c)
    (block,) = form.phase_blocks()
    assert block.gadgets == [(0b11, Phase.exact(1, 4))]
    assert block.linear == [0b01, 0b10]  # the mirrored CNOT restores identity


def test_opposite_gadgets_cancel_in_form():
    c = Circuit(2, [
        Gate(GateKind.CNOT, (0, 1)), Gate(GateKind.T, (1,)), Gate(GateKind.CNOT, (0, 1)),
        Gate(GateKind.CNOT, (0, 1)), Gate(GateKind.TDG, (1,)), Gate(GateKind.CNOT, (0, 1)),
    ])
    form = to_gadget_form(c)
    assert all(not b.gadgets for b in form.phase_blocks())
    assert form.t_count() == 0


def test_single_wire_gadget():
    c = Circuit(1, [Gate(GateKind.RZ, (0,), Phase.exact(1, 3))])
    form = to_gadget_form(c)
    (block,) = form.phase_blocks()
    assert block.gadgets == [(0b1, Phase.exact(1, 3))]


def test_equal_parities_merge_with_summed_phases():
    c = Circuit(2, [
        Gate(GateKind.RZ, (0,), Phase.exact(1, 4)),
        Gate(GateKind.CNOT, (1, 0)),
        Gate(GateKind.CNOT, (1, 0)),
        Gate(GateKind.RZ, (0,), Phase.exact(1, 4)),
    ])
    form = to_gadget_form(c)
    (block,) = form.phase_blocks()
    assert block.gadgets == [(0b01, Phase.exact(1, 2))]


def test_gadget_merge_matches_diagonal_sum():
    # merging equal parities equals multiplying the commuting diagonal rotations
    rng = random.Random(51)
    for _ in range(20):
        width = rng.randint(1, 4)
        phases = [Phase.exact(rng.randrange(8), 4) for _ in range(3)]
        parity_gates = []
        ladder = [Gate(GateKind.CNOT, (w, width - 1)) for w in range(width - 1)]
        for p in phases:
            parity_gates += ladder + [Gate(GateKind.RZ, (width - 1,), p)] + ladder[::-1]
        c = Circuit(width, parity_gates)
        merged = resynthesize(to_gadget_form(c))
        assert np.max(np.abs(circuit_unitary(merged) - circuit_unitary(c))) < 1e-10
        total = phases[0] + phases[1] + phases[2]
        expect = 1 if not total.is_zero() else 0
        assert sum(1 for g in merged.gates if g.kind is GateKind.RZ) == expect


def test_interleavers_preserved():
    c = Circuit(2, [Gate(GateKind.H, (0,)), Gate(GateKind.CZ, (0, 1)), Gate(GateKind.SWAP, (0, 1))])
    form = to_gadget_form(c)
    assert not form.phase_blocks()
    assert resynthesize(form).gates == c.gates


def test_rx_enters_polynomial_as_hrzh():
    c = Circuit(1, [Gate(GateKind.RX, (0,), Phase.exact(1, 4))])
    form = to_gadget_form(c)
    (block,) = form.phase_blocks()
    assert block.gadgets == [(0b1, Phase.exact(1, 4))]
    out = resynthesize(form)
    assert np.max(np.abs(circuit_unitary(out) - circuit_unitary(c))) < 1e-12


def test_resynthesize_ladder_shape():
    form_block = PhaseBlock([(0b101, Phase.exact(1, 4))], [0b001, 0b010, 0b100])
    from zxopt import GadgetForm

    c = resynthesize(GadgetForm(3, [form_block]))
    # ladder onto wire 0 (the lowest-index wire of the parity), mirrored
    assert [g.kind for g in c.gates] == [GateKind.CNOT, GateKind.RZ, GateKind.CNOT]
    assert c.gates[0].qubits == (2, 0) and c.gates[1].qubits == (0,)


def test_resynthesize_empty():
    from zxopt import GadgetForm

    assert resynthesize(GadgetForm(2)).gates == []


def test_resynthesize_pure_linear_block():
    c = Circuit(3, [Gate(GateKind.CNOT, (0, 1)), Gate(GateKind.CNOT, (1, 2)),
                    Gate(GateKind.CNOT, (2, 0))])
    out = resynthesize(to_gadget_form(c))
    assert np.max(np.abs(circuit_unitary(out) - circuit_unitary(c))) < 1e-12


def test_round_trip_fuzz():
    rng = random.Random(52)
    for _ in range(60):
        c = random_circuit(rng, rng.randint(1, 5), rng.randint(0, 60))
        out = resynthesize(to_gadget_form(c))
        ok, _ = verify_equiv(c, out, 1e-8)
        assert ok
