"""Open multigraph ZX-diagrams.

A diagram is an undirected multigraph of phased Z/X spiders, Hadamard
boxes and boundary stubs, together with ordered input/output lists and a
tracked global scalar.  Only connectivity matters for the semantics; the
boundary lists give the matrix its row/column ordering (inputs on the
left, outputs on the right).

Conventions fixed here:

* Hadamards are explicit degree-2 ``H`` vertices, not edge decorations.
* Parallel edges are stored as multiplicities (the Hopf rule needs them).
* Plain self-loops are allowed on spiders only.
* Boundary vertices have degree exactly 1 and appear in exactly one of
  the input/output lists.

All module-level operations are pure: they copy their arguments and
return fresh diagrams, so values can be shared freely between threads.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

from .phase import Phase
from .scalar import Scalar


class IllFormedError(Exception):
    """A diagram invariant is violated."""


class VertexKind(str, Enum):
    Z = "Z"
    X = "X"
    H = "H"
    B = "B"

    def is_spider(self) -> bool:
        return self in (VertexKind.Z, VertexKind.X)

    def opposite(self) -> "VertexKind":
        if self is VertexKind.Z:
            return VertexKind.X
        if self is VertexKind.X:
            return VertexKind.Z
        raise ValueError(f"{self} has no opposite colour")


@dataclass
class Vertex:
    kind: VertexKind
    phase: Optional[Phase] = None


class Diagram:
    """Mutable container with value-semantic public operations.

    Mutators are used while a diagram is being built (constructors,
    composition, the rewrite engine working on its private copy); code
    that receives a diagram treats it as immutable.
    """

    __slots__ = ("_vertices", "_adj", "inputs", "outputs", "scalar", "_next_id")

    def __init__(self) -> None:
        self._vertices: Dict[int, Vertex] = {}
        self._adj: Dict[int, Dict[int, int]] = {}
        self.inputs: List[int] = []
        self.outputs: List[int] = []
        self.scalar: Scalar = Scalar.one()
        self._next_id: int = 0

    # -- construction -----------------------------------------------------

    def add_vertex(self, kind: VertexKind, phase: Optional[Phase] = None) -> int:
        if kind.is_spider():
            if phase is None:
                phase = Phase.zero()
        elif phase is not None:
            raise IllFormedError(f"{kind.value} vertices carry no phase")
        v = self._next_id
        self._next_id += 1
        self._vertices[v] = Vertex(kind, phase)
        self._adj[v] = {}
        return v

    def add_edge(self, u: int, v: int, mult: int = 1) -> None:
        if mult < 1:
            raise IllFormedError("edge multiplicity must be >= 1")
        if u not in self._vertices or v not in self._vertices:
            raise IllFormedError("edge endpoint does not exist")
        self._adj[u][v] = self._adj[u].get(v, 0) + mult
        if u != v:
            self._adj[v][u] = self._adj[v].get(u, 0) + mult

    def remove_edge(self, u: int, v: int, mult: int = 1) -> None:
        cur = self._adj[u].get(v, 0)
        if cur < mult:
            raise IllFormedError("removing more edges than present")
        if cur == mult:
            del self._adj[u][v]
            if u != v:
                del self._adj[v][u]
        else:
            self._adj[u][v] = cur - mult
            if u != v:
                self._adj[v][u] = cur - mult

    def remove_vertex(self, v: int) -> None:
        for w in list(self._adj[v]):
            if w != v:
                del self._adj[w][v]
        del self._adj[v]
        del self._vertices[v]
        self.inputs = [b for b in self.inputs if b != v]
        self.outputs = [b for b in self.outputs if b != v]

    def set_phase(self, v: int, phase: Phase) -> None:
        if not self._vertices[v].kind.is_spider():
            raise IllFormedError("only spiders carry phases")
        self._vertices[v].phase = phase

    def set_kind(self, v: int, kind: VertexKind) -> None:
        self._vertices[v].kind = kind

    # -- queries ------------------------------------------------------------

    def vertex_ids(self) -> List[int]:
        return sorted(self._vertices)

    def vertex(self, v: int) -> Vertex:
        return self._vertices[v]

    def kind(self, v: int) -> VertexKind:
        return self._vertices[v].kind

    def phase(self, v: int) -> Phase:
        p = self._vertices[v].phase
        if p is None:
            raise IllFormedError("vertex has no phase")
        return p

    def has_vertex(self, v: int) -> bool:
        return v in self._vertices

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (u, v, mult) with u <= v, in sorted order."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if v >= u:
                    yield u, v, self._adj[u][v]

    def neighbors(self, v: int) -> List[int]:
        return sorted(self._adj[v])

    def edge_mult(self, u: int, v: int) -> int:
        return self._adj[u].get(v, 0)

    def loop_mult(self, v: int) -> int:
        return self._adj[v].get(v, 0)

    def degree(self, v: int) -> int:
        """Endpoint count at v; self-loops count twice."""
        return sum(m for w, m in self._adj[v].items() if w != v) + 2 * self.loop_mult(v)

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_legs(self) -> int:
        return len(self.inputs) + len(self.outputs)

    def spider_ids(self) -> List[int]:
        return [v for v in self.vertex_ids() if self._vertices[v].kind.is_spider()]

    # -- copying / relabelling ----------------------------------------------

    def copy(self) -> "Diagram":
        d = Diagram()
        d._vertices = {v: Vertex(vx.kind, vx.phase) for v, vx in self._vertices.items()}
        d._adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.scalar = self.scalar.copy()
        d._next_id = self._next_id
        return d

    def relabelled(self, mapping: Dict[int, int]) -> "Diagram":
        """Rename vertices by a bijective mapping (testing/hashing aid)."""
        d = Diagram()
        d._vertices = {mapping[v]: Vertex(vx.kind, vx.phase) for v, vx in self._vertices.items()}
        d._adj = {mapping[v]: {mapping[w]: m for w, m in nbrs.items()} for v, nbrs in self._adj.items()}
        d.inputs = [mapping[b] for b in self.inputs]
        d.outputs = [mapping[b] for b in self.outputs]
        d.scalar = self.scalar.copy()
        d._next_id = max(mapping.values(), default=-1) + 1
        return d

    # -- validation --------------------------------------------------------

    def check_validity(self) -> None:
        seen_boundary = set()
        for lst, name in ((self.inputs, "input"), (self.outputs, "output")):
            for b in lst:
                if b not in self._vertices or self._vertices[b].kind is not VertexKind.B:
                    raise IllFormedError(f"{name} {b} is not a boundary vertex")
                if b in seen_boundary:
                    raise IllFormedError(f"boundary {b} listed twice")
                seen_boundary.add(b)
        for v, vx in self._vertices.items():
            if vx.kind is VertexKind.B:
                if v not in seen_boundary:
                    raise IllFormedError(f"boundary {v} is in neither inputs nor outputs")
                if self.degree(v) != 1:
                    raise IllFormedError(f"boundary {v} has degree {self.degree(v)} != 1")
            elif vx.kind is VertexKind.H:
                if self.degree(v) != 2:
                    raise IllFormedError(f"H-box {v} has degree {self.degree(v)} != 2")
                if self.loop_mult(v):
                    raise IllFormedError(f"H-box {v} has a self-loop")
                if vx.phase is not None:
                    raise IllFormedError(f"H-box {v} carries a phase")
            else:
                if vx.phase is None:
                    raise IllFormedError(f"spider {v} has no phase")
        for u, nbrs in self._adj.items():
            for v, m in nbrs.items():
                if m < 1:
                    raise IllFormedError("non-positive edge multiplicity")
                if v not in self._vertices:
                    raise IllFormedError("edge touches a nonexistent vertex")
                if u != v and self._adj[v].get(u) != m:
                    raise IllFormedError("asymmetric adjacency")

    # -- serialisation (diagram JSON format, version 1) -----------------------

    def to_json_dict(self) -> dict:
        vertices = []
        for v in self.vertex_ids():
            vx = self._vertices[v]
            entry: dict = {"id": v, "kind": vx.kind.value}
            if vx.phase is not None:
                entry["phase"] = vx.phase.to_json()
            vertices.append(entry)
        return {
            "version": 1,
            "scalar": self.scalar.to_json(),
            "vertices": vertices,
            "edges": [{"src": u, "dst": v, "mult": m} for u, v, m in self.edges()],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "Diagram":
        if obj.get("version") != 1:
            raise IllFormedError(f"unsupported diagram format version: {obj.get('version')!r}")
        d = Diagram()
        for entry in obj["vertices"]:
            kind = VertexKind(entry["kind"])
            phase = None
            if kind.is_spider():
                raw = entry.get("phase")
                phase = Phase.from_json(raw) if raw is not None else Phase.zero()
            v = int(entry["id"])
            if v in d._vertices:
                raise IllFormedError(f"duplicate vertex id {v}")
            d._vertices[v] = Vertex(kind, phase)
            d._adj[v] = {}
            d._next_id = max(d._next_id, v + 1)
        for e in obj["edges"]:
            d.add_edge(int(e["src"]), int(e["dst"]), int(e.get("mult", 1)))
        d.inputs = [int(b) for b in obj["inputs"]]
        d.outputs = [int(b) for b in obj["outputs"]]
        d.scalar = Scalar.from_json(obj["scalar"])
        d.check_validity()
        return d

    def __repr__(self) -> str:
        return (
            f"Diagram({self.num_vertices} vertices, "
            f"{sum(m for _, _, m in self.edges())} edges, "
            f"{len(self.inputs)}->{len(self.outputs)})"
        )


# -- constructors ------------------------------------------------------------


def identity(n: int) -> Diagram:
    """n parallel wires; the monoidal unit when n = 0."""
    if n < 0:
        raise ValueError("wire count must be >= 0")
    d = Diagram()
    for _ in range(n):
        b_in = d.add_vertex(VertexKind.B)
        b_out = d.add_vertex(VertexKind.B)
        d.add_edge(b_in, b_out)
        d.inputs.append(b_in)
        d.outputs.append(b_out)
    d.check_validity()
    return d


def spider(kind: VertexKind, phase: Phase, m: int, n: int) -> Diagram:
    """A single spider with m inputs and n outputs.

    A legless spider (m = n = 0) is rejected: that is a bare scalar and
    should be constructed through :class:`Scalar` instead.
    """
    if not kind.is_spider():
        raise ValueError("spider kind must be Z or X")
    if m + n < 1:
        raise ValueError("legless spider: construct a Scalar instead")
    d = Diagram()
    s = d.add_vertex(kind, phase)
    for _ in range(m):
        b = d.add_vertex(VertexKind.B)
        d.add_edge(b, s)
        d.inputs.append(b)
    for _ in range(n):
        b = d.add_vertex(VertexKind.B)
        d.add_edge(s, b)
        d.outputs.append(b)
    d.check_validity()
    return d


def hadamard() -> Diagram:
    """A single H-box on a wire; evaluates to the Hadamard matrix exactly."""
    d = Diagram()
    h = d.add_vertex(VertexKind.H)
    b_in = d.add_vertex(VertexKind.B)
    b_out = d.add_vertex(VertexKind.B)
    d.add_edge(b_in, h)
    d.add_edge(h, b_out)
    d.inputs.append(b_in)
    d.outputs.append(b_out)
    d.check_validity()
    return d


# -- composition ----------------------------------------------------------


def _glue_boundary_pair(d: Diagram, b_out: int, b_in: int) -> None:
    """Remove two boundary stubs and join the wires they terminated.

    Degenerate gluings are resolved by their exact tensor value: a pair
    that closes a bare loop contributes a factor 2, and a wire closing
    onto both legs of one H-box contributes trace(H) = 0.
    """
    if d.edge_mult(b_out, b_in):
        # the two stubs are wired to each other: gluing closes a circle
        d.remove_vertex(b_out)
        d.remove_vertex(b_in)
        d.scalar = d.scalar.times(2.0)
        return
    u = d.neighbors(b_out)[0]
    v = d.neighbors(b_in)[0]
    d.remove_vertex(b_out)
    d.remove_vertex(b_in)
    if u == v and d.kind(u) is VertexKind.H:
        # H-box with both legs joined: trace(H) = 0, a zero diagram
        d.remove_vertex(u)
        d.scalar = Scalar(0.0, d.scalar.exact)
        return
    d.add_edge(u, v)


def compose_seq(first: Diagram, second: Diagram) -> Diagram:
    """Plug the outputs of ``first`` into the inputs of ``second`` in order.

    eval(compose_seq(a, b)) = eval(b) @ eval(a).
    """
    if len(first.outputs) != len(second.inputs):
        raise ValueError(
            f"arity mismatch: {len(first.outputs)} outputs vs {len(second.inputs)} inputs"
        )
    d = first.copy()
    shift = d._next_id
    remap = {v: v + shift for v in second._vertices}
    sec = second.relabelled(remap)
    d._vertices.update(sec._vertices)
    d._adj.update(sec._adj)
    d._next_id = sec._next_id
    d.scalar = d.scalar.mul(sec.scalar)
    glue_pairs = list(zip(list(d.outputs), list(sec.inputs)))
    d.outputs = list(sec.outputs)
    for b_out, b_in in glue_pairs:
        _glue_boundary_pair(d, b_out, b_in)
    d.check_validity()
    return d


def compose_par(left: Diagram, right: Diagram) -> Diagram:
    """Disjoint union; eval = eval(left) (x) eval(right)."""
    d = left.copy()
    shift = d._next_id
    remap = {v: v + shift for v in right._vertices}
    r = right.relabelled(remap)
    d._vertices.update(r._vertices)
    d._adj.update(r._adj)
    d._next_id = r._next_id
    d.scalar = d.scalar.mul(r.scalar)
    d.inputs = d.inputs + r.inputs
    d.outputs = d.outputs + r.outputs
    d.check_validity()
    return d


def adjoint(d: Diagram) -> Diagram:
    """Swap inputs and outputs, negate phases, conjugate the scalar.

    eval(adjoint(d)) is the conjugate transpose of eval(d).
    """
    out = d.copy()
    out.inputs, out.outputs = out.outputs, out.inputs
    for vx in out._vertices.values():
        if vx.phase is not None:
            vx.phase = -vx.phase
    out.scalar = out.scalar.conjugate()
    out.check_validity()
    return out


# -- canonical hashing ------------------------------------------------------


def _phase_key(phase: Optional[Phase]):
    if phase is None:
        return ("-",)
    if phase.is_exact:
        f = phase.fraction
        return ("e", f.numerator, f.denominator)
    return ("n", phase.radians.hex())


def _refine(d: Diagram, colour: Dict[int, int]) -> Dict[int, int]:
    while True:
        sigs = {}
        for v in d.vertex_ids():
            nbr = tuple(
                sorted((colour[w], m) for w, m in d._adj[v].items() if w != v)
            )
            sigs[v] = (colour[v], nbr, d.loop_mult(v))
        order = sorted(set(sigs.values()))
        new = {v: order.index(sigs[v]) for v in sigs}
        if new == colour:
            return colour
        colour = new


def _canonical_encoding(d: Diagram, colour: Dict[int, int]) -> Optional[tuple]:
    classes: Dict[int, List[int]] = {}
    for v, c in colour.items():
        classes.setdefault(c, []).append(v)
    non_singleton = sorted(
        (len(vs), c) for c, vs in classes.items() if len(vs) > 1
    )
    if not non_singleton:
        order = sorted(d.vertex_ids(), key=lambda v: colour[v])
        pos = {v: i for i, v in enumerate(order)}
        verts = tuple(
            (d.kind(v).value, _phase_key(d._vertices[v].phase)) for v in order
        )
        edges = tuple(
            sorted(
                (min(pos[u], pos[v]), max(pos[u], pos[v]), m)
                for u, v, m in d.edges()
            )
        )
        return (
            verts,
            edges,
            tuple(pos[b] for b in d.inputs),
            tuple(pos[b] for b in d.outputs),
        )
    # individualise each member of the smallest non-singleton class and
    # take the lexicographically-least refinement
    _, c = non_singleton[0]
    best = None
    n = len(colour)
    for v in sorted(classes[c]):
        split = dict(colour)
        split[v] = n  # fresh colour
        enc = _canonical_encoding(d, _refine(d, split))
        if enc is not None and (best is None or enc < best):
            best = enc
    return best


def canonical_hash(d: Diagram) -> str:
    """Digest invariant under vertex relabelling.

    Equal digests imply the diagrams are isomorphic respecting kinds,
    phases, multiplicities, boundary order and the global scalar.  The
    converse does not hold across colours: the hash is structural, not
    semantic (a Z and an X identity wire hash differently).
    """
    base_keys = {}
    in_pos = {b: i for i, b in enumerate(d.inputs)}
    out_pos = {b: i for i, b in enumerate(d.outputs)}
    for v in d.vertex_ids():
        vx = d.vertex(v)
        if vx.kind is VertexKind.B:
            if v in in_pos:
                base_keys[v] = ("B", "in", in_pos[v])
            else:
                base_keys[v] = ("B", "out", out_pos[v])
        else:
            base_keys[v] = (vx.kind.value, _phase_key(vx.phase))
    order = sorted(set(base_keys.values()))
    colour = {v: order.index(k) for v, k in base_keys.items()}
    enc = _canonical_encoding(d, _refine(d, colour))
    payload = repr(
        (enc, d.scalar.value.real.hex(), d.scalar.value.imag.hex(), d.scalar.exact)
    )
    return hashlib.sha256(payload.encode()).hexdigest()
