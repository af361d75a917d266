"""Shared test fixtures: independent oracles and random generators.

The oracles here deliberately avoid the library's contraction engine
and gate translation: ``brute_force_eval`` sums over explicit edge
assignments with pure-Python complex arithmetic, and
``circuit_unitary`` builds gate matrices by basis-state action.  Tests
pit the library against these, never against itself.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from typing import Dict, List, Tuple

import numpy as np

from zxopt import Circuit, Diagram, Gate, GateKind, Phase, VertexKind

SQRT_HALF = math.sqrt(0.5)


# --------------------------------------------------------------------------
# oracle 1: brute-force tensor contraction over explicit edge assignments


def _entry(kind: VertexKind, phase, bits: Tuple[int, ...]) -> complex:
    if kind is VertexKind.H:
        a, b = bits
        return SQRT_HALF * (-1.0 if a == b == 1 else 1.0)
    alpha = phase.radians
    if not bits:  # legless spider: both corner terms survive
        return 1.0 + cmath.exp(1j * alpha)
    if kind is VertexKind.Z:
        if all(b == 0 for b in bits):
            return 1.0
        if all(b == 1 for b in bits):
            return cmath.exp(1j * alpha)
        return 0.0
    # X spider: conjugate every leg by H, i.e. sum over internal bits
    total = 0.0 + 0.0j
    for inner in itertools.product((0, 1), repeat=len(bits)):
        if all(b == 0 for b in inner):
            core = 1.0
        elif all(b == 1 for b in inner):
            core = cmath.exp(1j * alpha)
        else:
            continue
        weight = SQRT_HALF ** len(bits)
        sign = (-1.0) ** sum(i * o for i, o in zip(inner, bits))
        total += weight * sign * core
    return total


def brute_force_eval(d: Diagram) -> np.ndarray:
    """Sum over all edge-bit assignments; exponential and independent."""
    d.check_validity()
    endpoints: Dict[int, List[int]] = {v: [] for v in d.vertex_ids()}
    n_edges = 0
    boundary_edge: Dict[int, Tuple[int, int]] = {}  # boundary -> (edge, fixed side)
    edges = []
    for u, v, mult in d.edges():
        for _ in range(mult):
            e = n_edges
            n_edges += 1
            edges.append((u, v))
            endpoints[u].append(e)
            if u != v:
                endpoints[v].append(e)
            else:
                endpoints[u].append(e)
    for b in d.inputs + d.outputs:
        if endpoints[b]:
            boundary_edge[b] = endpoints[b][0]

    rows, cols = 2 ** len(d.outputs), 2 ** len(d.inputs)
    out = np.zeros((rows, cols), dtype=complex)
    fixed_edges = set(boundary_edge.values())
    internal = [e for e in range(n_edges) if e not in fixed_edges]
    for row in range(rows):
        for col in range(cols):
            fixed = {}
            for i, b in enumerate(d.outputs):
                fixed[boundary_edge[b]] = (row >> (len(d.outputs) - 1 - i)) & 1
            ok = True
            for i, b in enumerate(d.inputs):
                e = boundary_edge[b]
                bit = (col >> (len(d.inputs) - 1 - i)) & 1
                if e in fixed and fixed[e] != bit:
                    ok = False  # bare wire between two boundaries
                    break
                fixed[e] = bit
            if not ok:
                continue
            total = 0.0 + 0.0j
            for assign in itertools.product((0, 1), repeat=len(internal)):
                bits = dict(zip(internal, assign))
                bits.update(fixed)
                term = 1.0 + 0.0j
                for v in d.vertex_ids():
                    if d.kind(v) is VertexKind.B:
                        continue
                    vb = tuple(bits[e] for e in endpoints[v])
                    term *= _entry(d.kind(v), d.vertex(v).phase, vb)
                    if term == 0.0:
                        break
                total += term
            out[row, col] = total
    return d.scalar.value * out


# --------------------------------------------------------------------------
# oracle 2: circuit unitaries by basis-state action (qubit 0 = MSB)


def _embed_1q(u: np.ndarray, q: int, width: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(2**q), u), np.eye(2 ** (width - q - 1)))


_H2 = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT_HALF


def _rz(a: float) -> np.ndarray:
    return np.diag([1.0, cmath.exp(1j * a)]).astype(complex)


def gate_unitary(g: Gate, width: int) -> np.ndarray:
    dim = 2**width
    if g.kind is GateKind.H:
        return _embed_1q(_H2, g.qubits[0], width)
    rot = g.rotation()
    if rot is not None:
        axis, phase = rot
        u = _rz(phase.radians)
        if axis is GateKind.RX:
            u = _H2 @ u @ _H2
        return _embed_1q(u, g.qubits[0], width)
    mat = np.zeros((dim, dim), dtype=complex)
    for basis in range(dim):
        bits = [(basis >> (width - 1 - q)) & 1 for q in range(width)]
        if g.kind is GateKind.CNOT:
            c, t = g.qubits
            if bits[c]:
                bits[t] ^= 1
            target = sum(b << (width - 1 - q) for q, b in enumerate(bits))
            mat[target, basis] = 1.0
        elif g.kind is GateKind.CZ:
            a, b = g.qubits
            mat[basis, basis] = -1.0 if bits[a] and bits[b] else 1.0
        elif g.kind is GateKind.SWAP:
            a, b = g.qubits
            bits[a], bits[b] = bits[b], bits[a]
            target = sum(bb << (width - 1 - q) for q, bb in enumerate(bits))
            mat[target, basis] = 1.0
        else:  # pragma: no cover
            raise ValueError(g.kind)
    return mat


def circuit_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(2**c.width, dtype=complex)
    for g in c.gates:
        u = gate_unitary(g, c.width) @ u
    return u


# --------------------------------------------------------------------------
# random generators


def random_phase(rng: random.Random, exact_only: bool = False) -> Phase:
    if not exact_only and rng.random() < 0.15:
        return Phase.numeric(rng.uniform(0.0, 2.0 * math.pi))
    den = rng.choice([1, 1, 2, 2, 4, 4, 3, 8])
    return Phase.exact(rng.randrange(0, 2 * den), den)


def random_diagram(
    rng: random.Random, max_spiders: int = 8, max_legs: int = 6, exact_only: bool = False
) -> Diagram:
    """Valid random diagram: spiders, multi-edges, loops, H-boxes, wires."""
    d = Diagram()
    n = rng.randint(1, max_spiders)
    spiders = [
        d.add_vertex(rng.choice([VertexKind.Z, VertexKind.X]), random_phase(rng, exact_only))
        for _ in range(n)
    ]
    for _ in range(rng.randint(0, 2 * n)):
        u, v = rng.choice(spiders), rng.choice(spiders)
        if u == v:
            if rng.random() < 0.3:
                d.add_edge(u, u)
        else:
            d.add_edge(u, v, rng.choice([1, 1, 1, 2]))
    for _ in range(rng.randint(0, 2)):
        if len(spiders) >= 1:
            h = d.add_vertex(VertexKind.H)
            u, v = rng.choice(spiders), rng.choice(spiders)
            if u == v:
                d.add_edge(u, h, 2)
            else:
                d.add_edge(u, h)
                d.add_edge(h, v)
    legs = rng.randint(0, max_legs)
    for i in range(legs):
        b = d.add_vertex(VertexKind.B)
        d.add_edge(b, rng.choice(spiders))
        (d.inputs if rng.random() < 0.5 else d.outputs).append(b)
    d.check_validity()
    return d


def random_circuit(
    rng: random.Random,
    width: int,
    n_gates: int,
    exact_only: bool = True,
) -> Circuit:
    gates: List[Gate] = []
    kinds = list(GateKind)
    while len(gates) < n_gates:
        k = rng.choice(kinds)
        if k in (GateKind.CNOT, GateKind.CZ, GateKind.SWAP):
            if width < 2:
                continue
            a, b = rng.sample(range(width), 2)
            gates.append(Gate(k, (a, b)))
        elif k in (GateKind.RZ, GateKind.RX):
            gates.append(Gate(k, (rng.randrange(width),), random_phase(rng, exact_only)))
        else:
            gates.append(Gate(k, (rng.randrange(width),)))
    return Circuit(width, gates)
