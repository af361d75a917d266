"""The rewrite-rule catalogue, with oracle-verified soundness.

Each rule bundles a matcher (find every occurrence, deterministically
ordered), a rewriter (graph surgery on a working copy, returning the
exact scalar factor it applied) and a sampler that generates random
instances for soundness trials.  Patterns with variable arity cannot be
literal template diagrams, so the matcher/rewriter pair *is* the rule;
the soundness contract is that for every instance

    eval(pattern) == factor * eval(replacement)

which, once the caller folds the returned factor into the diagram
scalar, collapses to plain evaluation equality before vs. after.  The
catalogue self-checks a few instances of every rule on first load and
refuses to start if any factor is off.

Colour conventions: rules are colour-generic wherever they hold for
both colours; the matcher enumerates both colourings.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .diagram import Diagram, VertexKind
from .phase import Phase
from .scalar import Scalar
from .semantics import evaluate

SQRT2 = math.sqrt(2.0)

Z = VertexKind.Z
X = VertexKind.X
H = VertexKind.H
B = VertexKind.B


class SoundnessViolation(Exception):
    def __init__(self, rule: str, trial: int, deviation: float, detail: str = ""):
        self.rule = rule
        self.trial = trial
        self.deviation = deviation
        msg = f"rule {rule!r} failed soundness at trial {trial}: deviation {deviation:.3e}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass
class Match:
    """One occurrence of a rule pattern inside a diagram.

    ``vertices`` maps pattern role names to diagram vertex ids;
    ``phases`` and ``edges`` record what the matcher bound, so a match
    can be re-validated against a diagram before being applied.
    """

    rule: str
    vertices: Dict[str, int]
    phases: Dict[str, Phase] = field(default_factory=dict)
    edges: Dict[str, Tuple[int, int, int]] = field(default_factory=dict)

    def key(self) -> tuple:
        return (tuple(sorted(self.vertices.values())), tuple(sorted(self.vertices.items())))

    def fingerprint(self) -> tuple:
        return (self.rule, tuple(sorted(self.vertices.items())))


@dataclass(frozen=True)
class RewriteRule:
    """A directed rewrite with exact scalar accounting.

    ``decreases_measure`` is set only for rules that strictly reduce the
    engine's lexicographic (vertices, edge multiplicity, pi-flags)
    measure for every instance; exactly those rules make up the
    automatic ``full`` strategy.  ``fragment`` names the phase fragment
    the rule's fixed (non-variable) phases live in.
    """

    name: str
    description: str
    fragment: str  # "any" | "pi/2" | "pi/4"
    decreases_measure: bool
    matcher: Callable[[Diagram], List[Match]]
    rewriter: Callable[[Diagram, Match], Scalar]
    sampler: Callable[[random.Random], Diagram]
    in_circuit_safe: bool = False

    def matches(self, d: Diagram) -> List[Match]:
        return sorted(self.matcher(d), key=Match.key)


# --------------------------------------------------------------------------
# shared helpers


def _is_spider(d: Diagram, v: int) -> bool:
    return d.kind(v).is_spider()

def _plain_deg2(d: Diagram, v: int) -> bool:
    return _is_spider(d, v) and d.loop_mult(v) == 0 and d.degree(v) == 2


def _attach_boundary(d: Diagram, v: int, as_input: bool) -> int:
    b = d.add_vertex(B)
    d.add_edge(b, v)
    (d.inputs if as_input else d.outputs).append(b)
    return b


def _random_phase(rng: random.Random, exact_only: bool = False) -> Phase:
    if not exact_only and rng.random() < 0.1:
        return Phase.numeric(rng.uniform(0.0, 2.0 * math.pi))
    den = rng.choice([1, 1, 2, 2, 4, 4, 3, 8])
    return Phase.exact(rng.randrange(0, 2 * den), den)


def _random_colour(rng: random.Random) -> VertexKind:
    return rng.choice([Z, X])


# --------------------------------------------------------------------------
# (1) fusion: connected same-colour spiders merge, phases add


def _match_fusion(d: Diagram, wire_only: bool = False) -> List[Match]:
    out = []
    for u in d.vertex_ids():
        if not _is_spider(d, u):
            continue
        for v in d.neighbors(u):
            if v <= u or not d.has_vertex(v):
                continue
            if d.kind(v) is not d.kind(u):
                continue
            if wire_only and not (
                _plain_deg2(d, u) and _plain_deg2(d, v) and d.edge_mult(u, v) == 1
            ):
                continue
            out.append(
                Match(
                    rule="fusion-wire" if wire_only else "fusion",
                    vertices={"u": u, "v": v},
                    phases={"alpha": d.phase(u), "beta": d.phase(v)},
                    edges={"uv": (u, v, d.edge_mult(u, v))},
                )
            )
    return out


def _apply_fusion(d: Diagram, m: Match) -> Scalar:
    u, v = m.vertices["u"], m.vertices["v"]
    loops = d.loop_mult(v)
    moved = [(w, mult) for w, mult in ((w, d.edge_mult(v, w)) for w in d.neighbors(v))
             if w not in (u, v)]
    d.set_phase(u, d.phase(u) + d.phase(v))
    d.remove_vertex(v)
    for w, mult in moved:
        d.add_edge(u, w, mult)
    if loops:
        d.add_edge(u, u, loops)
    return Scalar.one()


def _sample_fusion(rng: random.Random) -> Diagram:
    d = Diagram()
    kind = _random_colour(rng)
    u = d.add_vertex(kind, _random_phase(rng))
    v = d.add_vertex(kind, _random_phase(rng))
    d.add_edge(u, v, rng.randint(1, 3))
    if rng.random() < 0.2:
        d.add_edge(u, u)
    for _ in range(rng.randint(0, 2)):
        _attach_boundary(d, u, rng.random() < 0.5)
    for _ in range(rng.randint(0, 2)):
        _attach_boundary(d, v, rng.random() < 0.5)
    return d


# --------------------------------------------------------------------------
# (2) identity-removal: phase-0 two-legged spider is a plain wire


def _match_identity_removal(d: Diagram) -> List[Match]:
    out = []
    for v in d.vertex_ids():
        if not _plain_deg2(d, v) or not d.phase(v).is_zero():
            continue
        nbrs = d.neighbors(v)
        if len(nbrs) == 1:
            u = w = nbrs[0]
            if d.kind(u) is H:
                continue  # would close a trace on an H-box
        else:
            u, w = nbrs
        out.append(
            Match(
                rule="identity-removal",
                vertices={"v": v},
                edges={"left": (v, u, 1), "right": (v, w, 1)},
            )
        )
    return out


def _apply_identity_removal(d: Diagram, m: Match) -> Scalar:
    v = m.vertices["v"]
    nbrs = d.neighbors(v)
    u, w = (nbrs[0], nbrs[0]) if len(nbrs) == 1 else nbrs
    d.remove_vertex(v)
    d.add_edge(u, w)
    return Scalar.one()


def _sample_identity_removal(rng: random.Random) -> Diagram:
    d = Diagram()
    v = d.add_vertex(_random_colour(rng), Phase.zero())
    style = rng.randrange(3)
    if style == 0:  # between two wires
        _attach_boundary(d, v, True)
        _attach_boundary(d, v, False)
    elif style == 1:  # boundary and a phased spider
        _attach_boundary(d, v, True)
        w = d.add_vertex(_random_colour(rng), _random_phase(rng))
        d.add_edge(v, w)
        _attach_boundary(d, w, False)
    else:  # both legs on one spider: removal creates its self-loop
        w = d.add_vertex(_random_colour(rng), _random_phase(rng))
        d.add_edge(v, w, 2)
        _attach_boundary(d, w, True)
        _attach_boundary(d, w, False)
    return d


# --------------------------------------------------------------------------
# (3) self-loop-removal: a plain self-loop on a spider is deleted


def _match_self_loop(d: Diagram) -> List[Match]:
    return [
        Match(rule="self-loop", vertices={"v": v}, edges={"loop": (v, v, d.loop_mult(v))})
        for v in d.vertex_ids()
        if _is_spider(d, v) and d.loop_mult(v) >= 1
    ]


def _apply_self_loop(d: Diagram, m: Match) -> Scalar:
    v = m.vertices["v"]
    d.remove_edge(v, v, 1)
    return Scalar.one()


def _sample_self_loop(rng: random.Random) -> Diagram:
    d = Diagram()
    v = d.add_vertex(_random_colour(rng), _random_phase(rng))
    d.add_edge(v, v, rng.randint(1, 2))
    for _ in range(rng.randint(0, 2)):
        _attach_boundary(d, v, rng.random() < 0.5)
    return d


# --------------------------------------------------------------------------
# (scalar-spider) legless spider absorbed into the global scalar


def _match_scalar_spider(d: Diagram) -> List[Match]:
    return [
        Match(rule="scalar-spider", vertices={"v": v}, phases={"alpha": d.phase(v)})
        for v in d.vertex_ids()
        if _is_spider(d, v) and d.degree(v) == 0
    ]


def _apply_scalar_spider(d: Diagram, m: Match) -> Scalar:
    v = m.vertices["v"]
    alpha = d.phase(v)
    d.remove_vertex(v)
    return Scalar(1.0 + alpha.exp(), alpha.is_exact)


def _sample_scalar_spider(rng: random.Random) -> Diagram:
    d = Diagram()
    d.add_vertex(_random_colour(rng), _random_phase(rng))
    if rng.random() < 0.5:
        w = d.add_vertex(_random_colour(rng), _random_phase(rng))
        _attach_boundary(d, w, True)
    return d


# --------------------------------------------------------------------------
# (4) colour-change: H-box on every leg of a spider flips its colour


def _match_colour_change(d: Diagram) -> List[Match]:
    out = []
    for v in d.vertex_ids():
        if not _is_spider(d, v) or d.loop_mult(v) or d.degree(v) == 0:
            continue
        hs = d.neighbors(v)
        ok = all(
            d.kind(h) is H and d.edge_mult(v, h) == 1
            for h in hs
        )
        if not ok:
            continue
        hset = set(hs)
        # exclude H-H chains hanging off v; hh-cancel owns those
        others = []
        for h in hs:
            w = [x for x in d.neighbors(h) if x != v]
            if not w or w[0] in hset:
                ok = False
                break
            others.append(w[0])
        if ok:
            out.append(
                Match(
                    rule="colour-change",
                    vertices={"v": v, **{f"h{i}": h for i, h in enumerate(hs)}},
                    phases={"alpha": d.phase(v)},
                )
            )
    return out


def _apply_colour_change(d: Diagram, m: Match) -> Scalar:
    v = m.vertices["v"]
    hs = [h for role, h in m.vertices.items() if role.startswith("h")]
    for h in hs:
        w = [x for x in d.neighbors(h) if x != v][0]
        d.remove_vertex(h)
        d.add_edge(v, w)
    d.set_kind(v, d.kind(v).opposite())
    return Scalar.one()


def _sample_colour_change(rng: random.Random) -> Diagram:
    d = Diagram()
    v = d.add_vertex(_random_colour(rng), _random_phase(rng))
    for i in range(rng.randint(1, 3)):
        h = d.add_vertex(H)
        d.add_edge(v, h)
        _attach_boundary(d, h, i == 0)
    return d


# --------------------------------------------------------------------------
# (5) hh-cancel: two H-boxes in series vanish


def _match_hh_cancel(d: Diagram) -> List[Match]:
    out = []
    for h1 in d.vertex_ids():
        if d.kind(h1) is not H:
            continue
        for h2 in d.neighbors(h1):
            if h2 <= h1 or d.kind(h2) is not H:
                continue
            if d.edge_mult(h1, h2) == 1:
                a = [x for x in d.neighbors(h1) if x != h2][0]
                b = [x for x in d.neighbors(h2) if x != h1][0]
                if a == b and d.kind(a) is H:
                    continue  # reconnecting would put a self-loop on an H-box
            out.append(Match(rule="hh-cancel", vertices={"h1": h1, "h2": h2}))
    return out


def _apply_hh_cancel(d: Diagram, m: Match) -> Scalar:
    h1, h2 = m.vertices["h1"], m.vertices["h2"]
    if d.edge_mult(h1, h2) == 2:
        # closed pair: trace(H H) = 2
        d.remove_vertex(h1)
        d.remove_vertex(h2)
        return Scalar(2.0)
    a = [x for x in d.neighbors(h1) if x != h2][0]
    b = [x for x in d.neighbors(h2) if x != h1][0]
    d.remove_vertex(h1)
    d.remove_vertex(h2)
    d.add_edge(a, b)
    return Scalar.one()


def _sample_hh_cancel(rng: random.Random) -> Diagram:
    d = Diagram()
    h1 = d.add_vertex(H)
    h2 = d.add_vertex(H)
    style = rng.randrange(3)
    if style == 0:  # on a wire
        d.add_edge(h1, h2)
        _attach_boundary(d, h1, True)
        _attach_boundary(d, h2, False)
    elif style == 1:  # both ends on one spider
        s = d.add_vertex(_random_colour(rng), _random_phase(rng))
        d.add_edge(s, h1)
        d.add_edge(h1, h2)
        d.add_edge(h2, s)
        _attach_boundary(d, s, True)
        _attach_boundary(d, s, False)
    else:  # closed pair
        d.add_edge(h1, h2, 2)
    return d


# --------------------------------------------------------------------------
# (6) euler-H: H-box -> Z(pi/2) X(pi/2) Z(pi/2), scalar e^{-i pi/4}


def _match_euler_h(d: Diagram) -> List[Match]:
    return [
        Match(rule="euler-h", vertices={"h": v})
        for v in d.vertex_ids()
        if d.kind(v) is H
    ]


def _apply_euler_h(d: Diagram, m: Match) -> Scalar:
    h = m.vertices["h"]
    nbrs = d.neighbors(h)
    a, b = (nbrs[0], nbrs[0]) if len(nbrs) == 1 else nbrs
    d.remove_vertex(h)
    z1 = d.add_vertex(Z, Phase.exact(1, 2))
    x = d.add_vertex(X, Phase.exact(1, 2))
    z2 = d.add_vertex(Z, Phase.exact(1, 2))
    d.add_edge(a, z1)
    d.add_edge(z1, x)
    d.add_edge(x, z2)
    d.add_edge(z2, b)
    return Scalar(Phase.exact(-1, 4).exp())


def _sample_euler_h(rng: random.Random) -> Diagram:
    d = Diagram()
    h = d.add_vertex(H)
    if rng.random() < 0.3:  # both legs on one spider
        s = d.add_vertex(_random_colour(rng), _random_phase(rng))
        d.add_edge(s, h, 2)
        _attach_boundary(d, s, True)
        _attach_boundary(d, s, False)
    else:
        _attach_boundary(d, h, True)
        _attach_boundary(d, h, False)
    return d


# --------------------------------------------------------------------------
# (7) copy: a 0/pi state is copied through an opposite-colour spider


def _match_copy(d: Diagram) -> List[Match]:
    out = []
    for s in d.vertex_ids():
        if not _is_spider(d, s) or d.loop_mult(s) or d.degree(s) != 1:
            continue
        p = d.phase(s)
        if not (p.is_exact and p.is_pauli()):
            continue
        zv = d.neighbors(s)[0]
        if not _is_spider(d, zv) or d.kind(zv) is d.kind(s) or d.loop_mult(zv):
            continue
        if d.degree(zv) > 3:  # keep the rewrite measure-decreasing
            continue
        out.append(
            Match(
                rule="copy",
                vertices={"s": s, "z": zv},
                phases={"k": p, "alpha": d.phase(zv)},
            )
        )
    return out


def _apply_copy(d: Diagram, m: Match) -> Scalar:
    s, zv = m.vertices["s"], m.vertices["z"]
    state_kind = d.kind(s)
    state_phase = d.phase(s)
    k = 1 if state_phase.is_pi() else 0
    alpha = d.phase(zv)
    targets = [
        (w, d.edge_mult(zv, w)) for w in d.neighbors(zv) if w != s
    ]
    d.remove_vertex(s)
    d.remove_vertex(zv)
    n = 0
    for w, mult in targets:
        for _ in range(mult):
            c = d.add_vertex(state_kind, state_phase)
            d.add_edge(c, w)
            n += 1
    factor = (alpha.exp() if k else 1.0) * SQRT2 ** (1 - n)
    return Scalar(factor, alpha.is_exact)


def _sample_copy(rng: random.Random) -> Diagram:
    d = Diagram()
    colour = _random_colour(rng)
    s = d.add_vertex(colour, Phase.exact(rng.randrange(2)))
    zv = d.add_vertex(colour.opposite(), _random_phase(rng))
    d.add_edge(s, zv)
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.7:
            _attach_boundary(d, zv, rng.random() < 0.5)
        else:
            w = d.add_vertex(_random_colour(rng), _random_phase(rng))
            d.add_edge(zv, w)
            _attach_boundary(d, w, False)
    return d


# --------------------------------------------------------------------------
# (8) pi-commute: push a pi-spider through the last rotation before an output


def _outputs_adjacent(d: Diagram) -> set:
    out = set()
    for b in d.outputs:
        out.update(d.neighbors(b))
    return out


def _match_pi_commute(d: Diagram) -> List[Match]:
    out = []
    out_adj = _outputs_adjacent(d)
    output_set = set(d.outputs)
    for x in d.vertex_ids():
        if not _plain_deg2(d, x):
            continue
        px = d.phase(x)
        if not (px.is_exact and px.is_pi()):
            continue
        if x in out_adj:
            continue
        for zv in d.neighbors(x):
            if not _plain_deg2(d, zv) or d.kind(zv) is d.kind(x):
                continue
            if d.edge_mult(x, zv) != 1:
                continue
            if d.phase(zv).is_pi():
                continue  # swapping two pi-spiders would not reduce the measure
            others = [w for w in d.neighbors(zv) if w != x]
            if len(others) != 1 or others[0] not in output_set:
                continue
            out.append(
                Match(
                    rule="pi-commute",
                    vertices={"x": x, "z": zv},
                    phases={"alpha": d.phase(zv)},
                )
            )
    return out


def _apply_pi_commute(d: Diagram, m: Match) -> Scalar:
    x, zv = m.vertices["x"], m.vertices["z"]
    colour = d.kind(x)
    alpha = d.phase(zv)
    d.set_kind(x, colour.opposite())
    d.set_phase(x, -alpha)
    d.set_kind(zv, colour)
    d.set_phase(zv, Phase.pi())
    return Scalar(alpha.exp(), alpha.is_exact)


def _sample_pi_commute(rng: random.Random) -> Diagram:
    d = Diagram()
    colour = _random_colour(rng)
    x = d.add_vertex(colour, Phase.pi())
    alpha = _random_phase(rng)
    while alpha.is_pi():
        alpha = _random_phase(rng)
    zv = d.add_vertex(colour.opposite(), alpha)
    d.add_edge(x, zv)
    if rng.random() < 0.5:
        _attach_boundary(d, x, True)
    else:
        w = d.add_vertex(_random_colour(rng), _random_phase(rng))
        d.add_edge(w, x)
        _attach_boundary(d, w, True)
    _attach_boundary(d, zv, False)
    return d


# --------------------------------------------------------------------------
# (9) bialgebra: the alternating 4-cycle rewrites to the crossed form


def _match_bialgebra(d: Diagram) -> List[Match]:
    out = []
    seen = set()
    for z1 in d.vertex_ids():
        if d.kind(z1) is not Z or not _bialg_ok(d, z1):
            continue
        xs = [
            w
            for w in d.neighbors(z1)
            if d.kind(w) is X and _bialg_ok(d, w) and d.edge_mult(z1, w) == 1
        ]
        for i, x1 in enumerate(xs):
            for x2 in xs[i + 1 :]:
                commons = [
                    w
                    for w in d.neighbors(x1)
                    if w != z1
                    and d.kind(w) is Z
                    and _bialg_ok(d, w)
                    and d.edge_mult(x1, w) == 1
                    and d.edge_mult(x2, w) == 1
                ]
                for z2 in commons:
                    quad = frozenset((z1, z2, x1, x2))
                    if len(quad) != 4 or quad in seen:
                        continue
                    ext = {}
                    ok = True
                    for role, v in (("z1", z1), ("z2", z2), ("x1", x1), ("x2", x2)):
                        e = [w for w in d.neighbors(v) if w not in quad]
                        if len(e) != 1 or d.edge_mult(v, e[0]) != 1:
                            ok = False
                            break
                        ext[role] = e[0]
                    if not ok:
                        continue
                    seen.add(quad)
                    out.append(
                        Match(
                            rule="bialgebra",
                            vertices={
                                "z1": min(z1, z2),
                                "z2": max(z1, z2),
                                "x1": min(x1, x2),
                                "x2": max(x1, x2),
                            },
                        )
                    )
    return out


def _bialg_ok(d: Diagram, v: int) -> bool:
    return (
        _is_spider(d, v)
        and d.phase(v).is_zero()
        and d.loop_mult(v) == 0
        and d.degree(v) == 3
    )


def _apply_bialgebra(d: Diagram, m: Match) -> Scalar:
    z1, z2 = m.vertices["z1"], m.vertices["z2"]
    x1, x2 = m.vertices["x1"], m.vertices["x2"]
    quad = {z1, z2, x1, x2}
    ez = [next(w for w in d.neighbors(v) if w not in quad) for v in (z1, z2)]
    ex = [next(w for w in d.neighbors(v) if w not in quad) for v in (x1, x2)]
    for v in (z1, z2, x1, x2):
        d.remove_vertex(v)
    p = d.add_vertex(X, Phase.zero())
    q = d.add_vertex(Z, Phase.zero())
    for w in ez:
        d.add_edge(p, w)
    for w in ex:
        d.add_edge(q, w)
    d.add_edge(p, q)
    return Scalar(1.0 / SQRT2)


def _sample_bialgebra(rng: random.Random) -> Diagram:
    d = Diagram()
    z1 = d.add_vertex(Z, Phase.zero())
    z2 = d.add_vertex(Z, Phase.zero())
    x1 = d.add_vertex(X, Phase.zero())
    x2 = d.add_vertex(X, Phase.zero())
    for a in (z1, z2):
        for b in (x1, x2):
            d.add_edge(a, b)
    for v in (z1, z2):
        _attach_boundary(d, v, True)
    for v in (x1, x2):
        _attach_boundary(d, v, False)
    return d


# --------------------------------------------------------------------------
# (10) hopf: a double edge between opposite-colour spiders is deleted


def _match_hopf(d: Diagram) -> List[Match]:
    out = []
    for u in d.vertex_ids():
        if not _is_spider(d, u):
            continue
        for v in d.neighbors(u):
            if v <= u or not _is_spider(d, v) or d.kind(v) is d.kind(u):
                continue
            if d.edge_mult(u, v) >= 2:
                out.append(
                    Match(
                        rule="hopf",
                        vertices={"u": u, "v": v},
                        edges={"uv": (u, v, d.edge_mult(u, v))},
                    )
                )
    return out


def _apply_hopf(d: Diagram, m: Match) -> Scalar:
    u, v = m.vertices["u"], m.vertices["v"]
    d.remove_edge(u, v, 2)
    return Scalar(0.5)


def _sample_hopf(rng: random.Random) -> Diagram:
    d = Diagram()
    colour = _random_colour(rng)
    u = d.add_vertex(colour, _random_phase(rng))
    v = d.add_vertex(colour.opposite(), _random_phase(rng))
    d.add_edge(u, v, rng.randint(2, 4))
    for _ in range(rng.randint(0, 2)):
        _attach_boundary(d, u, True)
    for _ in range(rng.randint(0, 2)):
        _attach_boundary(d, v, False)
    return d


# --------------------------------------------------------------------------
# (11) y-convert: +-pi/2 conjugation swaps which colour carries the phase


_HALF = Fraction(1, 2)
_NEG_HALF = Fraction(3, 2)


def _match_y_convert(d: Diagram) -> List[Match]:
    out = []
    for s2 in d.vertex_ids():
        if not _plain_deg2(d, s2):
            continue
        nbrs = d.neighbors(s2)
        if len(nbrs) != 2:
            continue
        s1, s3 = nbrs
        for a, b in ((s1, s3), (s3, s1)):
            if not (_plain_deg2(d, a) and _plain_deg2(d, b)):
                continue
            if d.kind(a) is not d.kind(b) or d.kind(a) is d.kind(s2):
                continue
            if d.edge_mult(a, s2) != 1 or d.edge_mult(b, s2) != 1:
                continue
            pa, pb = d.phase(a), d.phase(b)
            if not (pa.is_exact and pb.is_exact):
                continue
            if pa.fraction == _HALF and pb.fraction == _NEG_HALF:
                out.append(
                    Match(
                        rule="y-convert",
                        vertices={"plus": a, "mid": s2, "minus": b},
                        phases={"alpha": d.phase(s2)},
                    )
                )
    return out


def _apply_y_convert(d: Diagram, m: Match) -> Scalar:
    plus, mid, minus = m.vertices["plus"], m.vertices["mid"], m.vertices["minus"]
    outer = d.kind(plus)
    d.set_kind(plus, outer.opposite())
    d.set_phase(plus, Phase.exact(-1, 2))
    d.set_kind(minus, outer.opposite())
    d.set_phase(minus, Phase.exact(1, 2))
    d.set_kind(mid, outer)
    return Scalar.one()


def _sample_y_convert(rng: random.Random) -> Diagram:
    d = Diagram()
    outer = _random_colour(rng)
    s1 = d.add_vertex(outer, Phase.exact(1, 2))
    s2 = d.add_vertex(outer.opposite(), _random_phase(rng))
    s3 = d.add_vertex(outer, Phase.exact(-1, 2))
    d.add_edge(s1, s2)
    d.add_edge(s2, s3)
    _attach_boundary(d, s1, True)
    _attach_boundary(d, s3, False)
    return d


# --------------------------------------------------------------------------
# (12) gadget-cancel: opposite-phase gadgets on the same leg set delete


def _gadget_anatomy(d: Diagram, core: int) -> Optional[Tuple[int, Phase, frozenset]]:
    """If ``core`` is the body of a phase gadget, return (hat, phase, legs)."""
    if not _is_spider(d, core) or not d.phase(core).is_zero() or d.loop_mult(core):
        return None
    hat = None
    legs = []
    for w in d.neighbors(core):
        if d.edge_mult(core, w) != 1 or not _is_spider(d, w):
            return None
        if d.kind(w) is d.kind(core):
            return None
        if d.degree(w) == 1:
            if hat is not None:
                return None  # two hats: not a gadget
            hat = w
        else:
            legs.append(w)
    if hat is None or not legs:
        return None
    return hat, d.phase(hat), frozenset(legs)


def _match_gadget_cancel(d: Diagram) -> List[Match]:
    gadgets = []
    for core in d.vertex_ids():
        g = _gadget_anatomy(d, core)
        if g is not None:
            gadgets.append((core, *g))
    out = []
    for i, (c1, h1, p1, legs1) in enumerate(gadgets):
        for c2, h2, p2, legs2 in gadgets[i + 1 :]:
            if d.kind(c1) is not d.kind(c2) or legs1 != legs2:
                continue
            if not (p1.is_exact and p2.is_exact and (p1 + p2).is_zero()):
                continue
            out.append(
                Match(
                    rule="gadget-cancel",
                    vertices={"core1": c1, "hat1": h1, "core2": c2, "hat2": h2},
                    phases={"alpha": p1},
                )
            )
    return out


def _apply_gadget_cancel(d: Diagram, m: Match) -> Scalar:
    c1 = m.vertices["core1"]
    k = d.degree(c1) - 1
    for role in ("core1", "hat1", "core2", "hat2"):
        d.remove_vertex(m.vertices[role])
    return Scalar(2.0 ** (1 - k))


def _sample_gadget_cancel(rng: random.Random) -> Diagram:
    d = Diagram()
    colour = _random_colour(rng)
    k = rng.randint(1, 3)
    wires = []
    for _ in range(k):
        w = d.add_vertex(colour.opposite(), _random_phase(rng))
        _attach_boundary(d, w, True)
        _attach_boundary(d, w, False)
        wires.append(w)
    alpha = _random_phase(rng, exact_only=True)
    for phase in (alpha, -alpha):
        core = d.add_vertex(colour, Phase.zero())
        hat = d.add_vertex(colour.opposite(), phase)
        d.add_edge(core, hat)
        for w in wires:
            d.add_edge(core, w)
    return d


# --------------------------------------------------------------------------
# (cnot-cancel) two adjacent CNOTs annihilate (circuit-safe hopf)


def _match_cnot_cancel(d: Diagram) -> List[Match]:
    out = []
    seen = set()
    for a1 in d.vertex_ids():
        if not _cnot_ok(d, a1) or d.kind(a1) is not Z:
            continue
        for b1 in d.neighbors(a1):
            if not _cnot_ok(d, b1) or d.kind(b1) is not X or d.edge_mult(a1, b1) != 1:
                continue
            for a2 in d.neighbors(a1):
                if a2 in (b1,) or not _cnot_ok(d, a2) or d.kind(a2) is not Z:
                    continue
                if d.edge_mult(a1, a2) != 1:
                    continue
                for b2 in d.neighbors(a2):
                    if b2 in (a1, b1) or not _cnot_ok(d, b2) or d.kind(b2) is not X:
                        continue
                    if (
                        d.edge_mult(a2, b2) != 1
                        or d.edge_mult(b1, b2) != 1
                        or b2 in d.neighbors(a1)
                        or b1 in d.neighbors(a2)
                    ):
                        continue
                    quad = frozenset((a1, a2, b1, b2))
                    if quad in seen:
                        continue
                    ok = True
                    for v in (a1, a2, b1, b2):
                        ext = [w for w in d.neighbors(v) if w not in quad]
                        if len(ext) != 1:
                            ok = False
                            break
                    if not ok:
                        continue
                    ea = [next(w for w in d.neighbors(v) if w not in quad) for v in (a1, a2)]
                    eb = [next(w for w in d.neighbors(v) if w not in quad) for v in (b1, b2)]
                    if ea[0] == ea[1] and d.kind(ea[0]) is H:
                        continue
                    if eb[0] == eb[1] and d.kind(eb[0]) is H:
                        continue
                    seen.add(quad)
                    out.append(
                        Match(
                            rule="cnot-cancel",
                            vertices={"z1": a1, "z2": a2, "x1": b1, "x2": b2},
                        )
                    )
    return out


def _cnot_ok(d: Diagram, v: int) -> bool:
    return (
        _is_spider(d, v)
        and d.phase(v).is_zero()
        and d.loop_mult(v) == 0
        and d.degree(v) == 3
    )


def _apply_cnot_cancel(d: Diagram, m: Match) -> Scalar:
    quad = set(m.vertices.values())
    ez = [
        next(w for w in d.neighbors(m.vertices[r]) if w not in quad) for r in ("z1", "z2")
    ]
    ex = [
        next(w for w in d.neighbors(m.vertices[r]) if w not in quad) for r in ("x1", "x2")
    ]
    for v in quad:
        d.remove_vertex(v)
    d.add_edge(ez[0], ez[1])
    d.add_edge(ex[0], ex[1])
    return Scalar(0.5)


def _sample_cnot_cancel(rng: random.Random) -> Diagram:
    d = Diagram()
    z1 = d.add_vertex(Z, Phase.zero())
    z2 = d.add_vertex(Z, Phase.zero())
    x1 = d.add_vertex(X, Phase.zero())
    x2 = d.add_vertex(X, Phase.zero())
    d.add_edge(z1, x1)
    d.add_edge(z2, x2)
    d.add_edge(z1, z2)
    d.add_edge(x1, x2)
    _attach_boundary(d, z1, True)
    _attach_boundary(d, x1, True)
    _attach_boundary(d, z2, False)
    _attach_boundary(d, x2, False)
    return d


# --------------------------------------------------------------------------
# catalogue


def _build_rules() -> List[RewriteRule]:
    return [
        RewriteRule(
            "fusion",
            "connected same-colour spiders merge; phases add; the connecting "
            "edges (including surplus parallel ones) disappear at factor 1",
            "any", True, _match_fusion, _apply_fusion, _sample_fusion,
        ),
        RewriteRule(
            "identity-removal",
            "a phase-0 spider with exactly two legs is a plain wire",
            "any", True, _match_identity_removal, _apply_identity_removal,
            _sample_identity_removal, in_circuit_safe=True,
        ),
        RewriteRule(
            "self-loop",
            "a plain self-loop on a spider is deleted at factor 1",
            "any", True, _match_self_loop, _apply_self_loop, _sample_self_loop,
        ),
        RewriteRule(
            "scalar-spider",
            "a legless spider leaves the graph as the scalar 1 + e^{i alpha}",
            "any", True, _match_scalar_spider, _apply_scalar_spider, _sample_scalar_spider,
        ),
        RewriteRule(
            "colour-change",
            "an H-box on every leg of a spider flips its colour",
            "any", False, _match_colour_change, _apply_colour_change, _sample_colour_change,
        ),
        RewriteRule(
            "hh-cancel",
            "two H-boxes in series vanish (a closed pair leaves the scalar 2)",
            "any", True, _match_hh_cancel, _apply_hh_cancel, _sample_hh_cancel,
            in_circuit_safe=True,
        ),
        RewriteRule(
            "euler-h",
            "an H-box becomes the Z(pi/2) X(pi/2) Z(pi/2) chain at factor "
            "e^{-i pi/4}",
            "pi/2", False, _match_euler_h, _apply_euler_h, _sample_euler_h,
        ),
        RewriteRule(
            "copy",
            "a 0/pi state is copied through an opposite-colour spider onto "
            "its remaining legs (kept to degree <= 3 so the measure drops)",
            "any", True, _match_copy, _apply_copy, _sample_copy,
        ),
        RewriteRule(
            "pi-commute",
            "a pi-spider commutes through the final rotation before an "
            "output, negating it, at factor e^{i alpha}",
            "any", True, _match_pi_commute, _apply_pi_commute, _sample_pi_commute,
        ),
        RewriteRule(
            "bialgebra",
            "the alternating phase-free 4-cycle rewrites to the crossed "
            "two-spider form at factor 1/sqrt(2)",
            "pi/2", False, _match_bialgebra, _apply_bialgebra, _sample_bialgebra,
        ),
        RewriteRule(
            "hopf",
            "one parallel pair of edges between opposite-colour spiders is "
            "deleted at factor 1/2",
            "any", True, _match_hopf, _apply_hopf, _sample_hopf,
        ),
        RewriteRule(
            "y-convert",
            "conjugation by +-pi/2 rotations moves a phase to the other "
            "colour's axis",
            "pi/2", False, _match_y_convert, _apply_y_convert, _sample_y_convert,
        ),
        RewriteRule(
            "gadget-cancel",
            "two phase gadgets on the same leg set with opposite phases "
            "delete at factor 2^{1-k}",
            "any", True, _match_gadget_cancel, _apply_gadget_cancel,
            _sample_gadget_cancel, in_circuit_safe=True,
        ),
        RewriteRule(
            "fusion-wire",
            "fusion restricted to two-legged spiders on a wire (rotation "
            "merging; keeps gate form)",
            "any", True,
            lambda d: _match_fusion(d, wire_only=True),
            _apply_fusion, _sample_fusion_wire, in_circuit_safe=True,
        ),
        RewriteRule(
            "cnot-cancel",
            "two adjacent identical CNOTs annihilate at factor 1/2 "
            "(fusion + hopf in one gate-form-preserving step)",
            "any", True, _match_cnot_cancel, _apply_cnot_cancel, _sample_cnot_cancel,
            in_circuit_safe=True,
        ),
    ]


def _sample_fusion_wire(rng: random.Random) -> Diagram:
    d = Diagram()
    kind = _random_colour(rng)
    u = d.add_vertex(kind, _random_phase(rng))
    v = d.add_vertex(kind, _random_phase(rng))
    d.add_edge(u, v)
    _attach_boundary(d, u, True)
    _attach_boundary(d, v, False)
    return d


_CATALOG: Optional[List[RewriteRule]] = None


def catalog() -> List[RewriteRule]:
    """The rule catalogue; self-checked once per process on first use."""
    global _CATALOG
    if _CATALOG is None:
        rules = _build_rules()
        for rule in rules:
            validate_rule_soundness(rule, trials=5, seed=20260809)
        _CATALOG = rules
    return _CATALOG


def rule_by_name(name: str) -> RewriteRule:
    for rule in catalog():
        if rule.name == name:
            return rule
    raise KeyError(f"no such rule: {name!r}")


# --------------------------------------------------------------------------
# soundness validation


@dataclass(frozen=True)
class RuleReport:
    name: str
    trials: int
    max_deviation: float
    passed: bool


def validate_rule_soundness(
    rule: RewriteRule, trials: int, seed: int, tol: float = 1e-9
) -> RuleReport:
    """Check eval-equality over random instances of one rule.

    Per-trial RNG streams are derived deterministically from the seed,
    so trials are order-independent and reproducible.  Raises
    :class:`SoundnessViolation` on the first failing trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    worst = 0.0
    for i in range(trials):
        rng = random.Random(f"{seed}:{rule.name}:{i}")
        d = rule.sampler(rng)
        d.check_validity()
        ms = rule.matches(d)
        if not ms:
            raise SoundnessViolation(rule.name, i, float("nan"), "sampler produced no match")
        m = ms[0]
        before = evaluate(d)
        work = d.copy()
        factor = rule.rewriter(work, m)
        work.scalar = work.scalar.mul(factor)
        work.check_validity()
        after = evaluate(work)
        dev = float(np.max(np.abs(before - after))) if before.size else 0.0
        worst = max(worst, dev)
        if dev > tol:
            raise SoundnessViolation(rule.name, i, dev)
    return RuleReport(rule.name, trials, worst, True)


def validate_catalog(trials: int = 1000, seed: int = 0, tol: float = 1e-9):
    """Run soundness trials for every rule; returns (reports, all_passed)."""
    reports = []
    ok = True
    for rule in catalog():
        try:
            reports.append(validate_rule_soundness(rule, trials, seed, tol))
        except SoundnessViolation as exc:
            reports.append(RuleReport(rule.name, trials, exc.deviation, False))
            ok = False
    return reports, ok


# --------------------------------------------------------------------------
# triple recolouring (numeric Euler-angle decomposition)


def _zm(theta: float) -> np.ndarray:
    return np.array([[1.0, 0.0], [0.0, cmath.exp(1j * theta)]], dtype=complex)


def _xm(theta: float) -> np.ndarray:
    h = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
    return h @ _zm(theta) @ h


def _zxz_decompose(n: np.ndarray) -> Tuple[float, float, float, complex]:
    """Find (a, b, c, s) with n = s * Zm(a) @ Xm(b) @ Zm(c), b in [0, pi].

    Degenerate b in {0, pi} folds the trailing angle into the leading
    one (c = 0).  Ties in the branch choice resolve toward smaller a by
    normalising all angles into [0, 2*pi).
    """
    b = 2.0 * math.atan2(abs(n[0, 1]), abs(n[0, 0]))
    eps = 1e-12
    if b <= eps:  # diagonal: n = s * diag(1, e^{i a})
        s = n[0, 0]
        a = cmath.phase(n[1, 1] / s) % (2.0 * math.pi)
        return a, 0.0, 0.0, s
    if b >= math.pi - eps:  # antidiagonal
        s = n[0, 1]
        a = cmath.phase(n[1, 0] / s) % (2.0 * math.pi)
        return a, math.pi, 0.0, s
    a = cmath.phase(1j * n[1, 0] / n[0, 0]) % (2.0 * math.pi)
    c = cmath.phase(1j * n[0, 1] / n[0, 0]) % (2.0 * math.pi)
    s = n[0, 0] / (cmath.exp(0.5j * b) * math.cos(0.5 * b))
    return a, b, c, s


def recolor_triple(
    alpha: Phase, beta: Phase, gamma: Phase
) -> Tuple[Phase, Phase, Phase, Scalar]:
    """Numeric colour exchange for a Z-X-Z phase triple.

    Returns numeric phases (a', b', c') and a scalar with

        Zm(alpha) Xm(beta) Zm(gamma) = scalar * Xm(a') Zm(b') Xm(c')

    as 2x2 matrices.  Computed by Euler-angle decomposition of the
    product, not symbolic trigonometry, so the outputs are numeric
    phases and the scalar is marked inexact.
    """
    m = _zm(alpha.radians) @ _xm(beta.radians) @ _zm(gamma.radians)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
    a, b, c, s = _zxz_decompose(h @ m @ h)
    return (
        Phase.numeric(a),
        Phase.numeric(b),
        Phase.numeric(c),
        Scalar(s, exact=False),
    )
