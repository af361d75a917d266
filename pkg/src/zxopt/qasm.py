"""Parser and emitter for the OpenQASM 2 subset.

Grammar: the ``OPENQASM 2.0;`` header, an optional
``include "qelib1.inc";``, a single ``qreg q[n];`` declaration, then
gate statements from {h, x, z, s, sdg, t, tdg, rz(expr), rx(expr), cx,
cz, swap} on ``q[i]`` operands, ``;``-terminated, with ``//`` comments.

Phase expressions ``[-]k*pi/d``, ``k*pi``, ``pi/d``, ``pi`` and plain
float literals are accepted; the pi-fraction forms parse to exact
phases.  The emitter prints exact phases back as pi-fractions, so
parse(emit(c)) is structurally equal to c.  No canonicalisation is
performed: an ``rz(pi/2)`` stays an RZ and is not rewritten to ``s``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .circuit import Circuit, Gate, GateKind, PARAMETRIC
from .phase import Phase


class QasmError(Exception):
    """Base class for QASM front-end errors."""


class QasmSyntaxError(QasmError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class UnsupportedGateError(QasmError):
    def __init__(self, gate: str, line: int):
        self.gate = gate
        self.line = line
        super().__init__(f"unsupported gate {gate!r} at line {line}")


_GATES = {k.value: k for k in GateKind}
_TWO_QUBIT = {GateKind.CNOT, GateKind.CZ, GateKind.SWAP}

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>//[^\n]*)
      | (?P<real>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
      | (?P<int>\d+)
      | (?P<id>[A-Za-z_][A-Za-z0-9_.]*)
      | (?P<str>"[^"]*")
      | (?P<sym>[;,()\[\]*/+-])
    """,
    re.VERBOSE,
)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: List[Tuple[str, str, int, int]] = []
        self._tokenize()
        self.idx = 0

    def _tokenize(self) -> None:
        while self.pos < len(self.text):
            m = _TOKEN.match(self.text, self.pos)
            if m is None:
                raise QasmSyntaxError(
                    f"unexpected character {self.text[self.pos]!r}", self.line, self.col
                )
            kind = m.lastgroup
            value = m.group()
            if kind not in ("ws", "comment"):
                self.tokens.append((kind, value, self.line, self.col))
            newlines = value.count("\n")
            if newlines:
                self.line += newlines
                self.col = len(value) - value.rfind("\n")
            else:
                self.col += len(value)
            self.pos = m.end()

    def peek(self) -> Optional[Tuple[str, str, int, int]]:
        return self.tokens[self.idx] if self.idx < len(self.tokens) else None

    def next(self) -> Tuple[str, str, int, int]:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", "", 1, 1)
            raise QasmSyntaxError("unexpected end of input", last[2], last[3])
        self.idx += 1
        return tok

    def expect(self, value: str) -> Tuple[str, str, int, int]:
        tok = self.next()
        if tok[1] != value:
            raise QasmSyntaxError(f"expected {value!r}, found {tok[1]!r}", tok[2], tok[3])
        return tok


def _parse_phase_expr(lx: _Lexer) -> Phase:
    """``[-]k*pi/d | k*pi | pi/d | pi | float`` up to the closing paren."""
    sign = 1
    tok = lx.peek()
    if tok and tok[1] == "-":
        lx.next()
        sign = -1
    tok = lx.next()
    kind, value, line, col = tok
    if kind in ("real", "int") and lx.peek() and lx.peek()[1] == "*":
        lx.expect("*")
        k = Fraction(value) if kind == "int" else Fraction(float(value))
        pi_tok = lx.next()
        if pi_tok[1] != "pi":
            raise QasmSyntaxError("expected 'pi' after '*'", pi_tok[2], pi_tok[3])
        den = 1
        if lx.peek() and lx.peek()[1] == "/":
            lx.expect("/")
            den_tok = lx.next()
            if den_tok[0] != "int":
                raise QasmSyntaxError("expected integer denominator", den_tok[2], den_tok[3])
            den = int(den_tok[1])
        frac = sign * k / den
        if kind == "int":
            return Phase(fraction=frac)
        return Phase.numeric(float(frac) * math.pi)
    if kind == "id" and value == "pi":
        den = 1
        if lx.peek() and lx.peek()[1] == "/":
            lx.expect("/")
            den_tok = lx.next()
            if den_tok[0] != "int":
                raise QasmSyntaxError("expected integer denominator", den_tok[2], den_tok[3])
            den = int(den_tok[1])
        return Phase(fraction=Fraction(sign, den))
    if kind in ("real", "int"):
        return Phase.numeric(sign * float(value))
    raise QasmSyntaxError(f"bad phase expression {value!r}", line, col)


def _parse_operand(lx: _Lexer, reg: str, size: int) -> int:
    name = lx.next()
    if name[0] != "id" or name[1] != reg:
        raise QasmSyntaxError(f"expected register {reg!r}", name[2], name[3])
    lx.expect("[")
    idx = lx.next()
    if idx[0] != "int":
        raise QasmSyntaxError("expected qubit index", idx[2], idx[3])
    lx.expect("]")
    q = int(idx[1])
    if not 0 <= q < size:
        raise QasmSyntaxError(f"qubit index {q} out of range [0, {size})", idx[2], idx[3])
    return q


def parse_qasm(text: str) -> Circuit:
    """Parse the QASM subset into a circuit, phases exact where possible."""
    lx = _Lexer(text)
    tok = lx.next()
    if tok[1] != "OPENQASM":
        raise QasmSyntaxError("missing OPENQASM header", tok[2], tok[3])
    ver = lx.next()
    if ver[1] != "2.0":
        raise QasmSyntaxError(f"unsupported OPENQASM version {ver[1]!r}", ver[2], ver[3])
    lx.expect(";")

    tok = lx.peek()
    if tok and tok[1] == "include":
        lx.next()
        inc = lx.next()
        if inc[0] != "str":
            raise QasmSyntaxError("expected include filename string", inc[2], inc[3])
        lx.expect(";")

    tok = lx.next()
    if tok[1] != "qreg":
        raise QasmSyntaxError("expected a qreg declaration", tok[2], tok[3])
    reg_tok = lx.next()
    if reg_tok[0] != "id":
        raise QasmSyntaxError("expected register name", reg_tok[2], reg_tok[3])
    reg = reg_tok[1]
    lx.expect("[")
    size_tok = lx.next()
    if size_tok[0] != "int":
        raise QasmSyntaxError("expected register size", size_tok[2], size_tok[3])
    size = int(size_tok[1])
    lx.expect("]")
    lx.expect(";")

    circuit = Circuit(size)
    while lx.peek() is not None:
        tok = lx.next()
        kind, value, line, col = tok
        if kind != "id":
            raise QasmSyntaxError(f"expected a gate name, found {value!r}", line, col)
        if value == "qreg":
            raise QasmSyntaxError("only a single qreg is supported", line, col)
        gate_kind = _GATES.get(value)
        if gate_kind is None:
            raise UnsupportedGateError(value, line)
        phase = None
        if gate_kind in PARAMETRIC:
            lx.expect("(")
            phase = _parse_phase_expr(lx)
            lx.expect(")")
        q1 = _parse_operand(lx, reg, size)
        if gate_kind in _TWO_QUBIT:
            lx.expect(",")
            q2 = _parse_operand(lx, reg, size)
            if q1 == q2:
                raise QasmSyntaxError("two-qubit gate needs distinct qubits", line, col)
            circuit.add(Gate(gate_kind, (q1, q2)))
        else:
            circuit.add(Gate(gate_kind, (q1,), phase))
        lx.expect(";")
    return circuit


def _format_phase(phase: Phase) -> str:
    if not phase.is_exact:
        return repr(phase.radians)
    f = phase.fraction
    if f == 0:
        return "0*pi"  # keeps the phase exact through a round-trip
    num, den = f.numerator, f.denominator
    if den == 1:
        return "pi" if num == 1 else f"{num}*pi"
    if num == 1:
        return f"pi/{den}"
    return f"{num}*pi/{den}"


def emit_qasm(c: Circuit) -> str:
    """Emit the circuit; parse_qasm(emit_qasm(c)) is structurally equal."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.width}];"]
    for g in c.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.phase is not None:
            lines.append(f"{g.kind.value}({_format_phase(g.phase)}) {args};")
        else:
            lines.append(f"{g.kind.value} {args};")
    return "\n".join(lines) + "\n"
