import random

import numpy as np
import pytest

from zxopt import (
    Circuit,
    ExtractionError,
    Gate,
    GateKind,
    Phase,
    QasmSyntaxError,
    UnsupportedGateError,
    emit_qasm,
    evaluate,
    from_gate_form,
    metrics,
    parse_qasm,
    to_diagram,
)

from helpers import circuit_unitary, random_circuit

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (1, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.RZ, (0,))  # missing phase
    with pytest.raises(ValueError):
        Circuit(1, [Gate(GateKind.H, (3,))])


def test_to_diagram_cnot_exact():
    assert np.max(np.abs(evaluate(to_diagram(Circuit(2, [Gate(GateKind.CNOT, (0, 1))]))) - CNOT)) < 1e-15


def test_to_diagram_matches_independent_unitary():
    rng = random.Random(41)
    for _ in range(60):
        c = random_circuit(rng, rng.randint(1, 3), rng.randint(0, 12), exact_only=False)
        got = evaluate(to_diagram(c))
        want = circuit_unitary(c)
        assert np.max(np.abs(got - want)) < 1e-10


def test_to_diagram_output_is_unitary():
    rng = random.Random(42)
    for _ in range(40):
        c = random_circuit(rng, rng.randint(1, 3), rng.randint(0, 15))
        u = evaluate(to_diagram(c))
        assert np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) < 1e-8


def test_three_cnots_equal_swap():
    c = Circuit(2, [Gate(GateKind.CNOT, (0, 1)), Gate(GateKind.CNOT, (1, 0)),
                    Gate(GateKind.CNOT, (0, 1))])
    assert np.max(np.abs(evaluate(to_diagram(c)) - SWAP)) < 1e-12


def test_extraction_round_trip():
    rng = random.Random(43)
    for _ in range(80):
        c = random_circuit(rng, rng.randint(1, 4), rng.randint(0, 16))
        c2 = from_gate_form(to_diagram(c))
        assert np.max(np.abs(circuit_unitary(c2) - circuit_unitary(c))) < 1e-9


def test_extraction_rejects_non_gate_form():
    from zxopt import VertexKind, Diagram

    d = Diagram()
    s = d.add_vertex(VertexKind.Z, Phase.exact(1, 4))
    bi = d.add_vertex(VertexKind.B)
    bo1 = d.add_vertex(VertexKind.B)
    bo2 = d.add_vertex(VertexKind.B)
    for b in (bi, bo1, bo2):
        d.add_edge(b, s)
    d.inputs, d.outputs = [bi], [bo1, bo2]
    with pytest.raises(ExtractionError):
        from_gate_form(d)


def test_metrics_counts():
    c = Circuit(2, [Gate(GateKind.T, (0,)), Gate(GateKind.CNOT, (0, 1)), Gate(GateKind.H, (1,))])
    m = metrics(c)
    assert (m.total_gates, m.two_qubit, m.t_count, m.h_count) == (3, 1, 1, 1)
    assert metrics(Circuit(3)).total_gates == 0


def test_metrics_t_in_disguise():
    m = metrics(Circuit(1, [Gate(GateKind.RZ, (0,), Phase.exact(1, 4))]))
    assert m.t_count == 1
    m = metrics(Circuit(1, [Gate(GateKind.RZ, (0,), Phase.numeric(np.pi / 4))]))
    assert m.t_count == 1 and m.generic_rotations == 0
    m = metrics(Circuit(1, [Gate(GateKind.RZ, (0,), Phase.numeric(0.3))]))
    assert m.t_count == 0 and m.generic_rotations == 1


# -- QASM front end -----------------------------------------------------------


def test_parse_minimal():
    c = parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\n")
    assert c.width == 2 and c.gates == [Gate(GateKind.CNOT, (0, 1))]


def test_parse_exact_phase():
    c = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrz(pi/4) q[0];\n")
    (g,) = c.gates
    assert g.phase.is_exact and g.phase.fraction.as_integer_ratio() == (1, 4)


def test_parse_phase_forms():
    src = "OPENQASM 2.0;\nqreg q[1];\n" + "\n".join(
        f"rz({expr}) q[0];" for expr in ["pi", "-pi/2", "3*pi/2", "-3*pi/4", "2*pi", "0.5", "1e-3"]
    )
    c = parse_qasm(src)
    fractions = [g.phase.fraction if g.phase.is_exact else None for g in c.gates]
    assert [str(f) if f is not None else None for f in fractions] == [
        "1", "3/2", "3/2", "5/4", "0", None, None,
    ]


def test_parse_unsupported_gate():
    with pytest.raises(UnsupportedGateError) as err:
        parse_qasm("OPENQASM 2.0;\nqreg q[3];\nccx q[0],q[1],q[2];\n")
    assert err.value.gate == "ccx"


def test_parse_errors_carry_position():
    with pytest.raises(QasmSyntaxError) as err:
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0]\ncx q[0],q[1];\n")
    assert err.value.line == 4  # the missing semicolon is noticed at 'cx'
    with pytest.raises(QasmSyntaxError):
        parse_qasm("OPENQASM 1.0;\nqreg q[1];\n")
    with pytest.raises(QasmSyntaxError):
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[7];\n")
    with pytest.raises(QasmSyntaxError):
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n")


def test_emit_round_trip_random():
    rng = random.Random(44)
    for _ in range(100):
        c = random_circuit(rng, rng.randint(1, 5), rng.randint(0, 25), exact_only=False)
        c2 = parse_qasm(emit_qasm(c))
        assert c2.width == c.width and c2.gates == c.gates


def test_emit_empty_circuit():
    text = emit_qasm(Circuit(3))
    assert text.splitlines() == ["OPENQASM 2.0;", 'include "qelib1.inc";', "qreg q[3];"]


def test_emit_keeps_rz_uncanonicalised():
    text = emit_qasm(Circuit(1, [Gate(GateKind.RZ, (0,), Phase.exact(1, 2))]))
    assert "rz(pi/2) q[0];" in text and "s q[0]" not in text


def test_comments_and_include_accepted():
    c = parse_qasm(
        'OPENQASM 2.0; // header\ninclude "qelib1.inc";\nqreg q[1]; // reg\n// gate\nh q[0];\n'
    )
    assert c.gates == [Gate(GateKind.H, (0,))]
