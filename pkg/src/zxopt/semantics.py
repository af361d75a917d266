"""Exact numeric evaluation of diagrams to dense complex matrices.

This is the soundness oracle for everything else: a diagram with m input
and n output legs evaluates to a 2^n x 2^m matrix, indexed big-endian
over the ordered boundary lists (the first output is the most
significant row bit).

The contraction is a greedy pairwise tensor contraction over the edge
indices, always picking the pair whose result has the smallest rank.
Correctness does not depend on the order (tested against randomised
orders); a hard width cap makes oversized requests fail cleanly instead
of exhausting memory.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from .diagram import Diagram, VertexKind
from .phase import Phase

DEFAULT_MAX_LEGS = 12
DEFAULT_WIDTH_CAP = 20

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) * math.sqrt(0.5)


class TooLargeError(Exception):
    """Evaluation would exceed the leg budget or the contraction width cap."""


def spider_matrix(kind: VertexKind, phase: Phase, m: int, n: int) -> np.ndarray:
    """The 2^n x 2^m matrix of a single spider with m inputs, n outputs.

    Z case: all zeros except the (0...0, 0...0) entry 1 and the
    (1...1, 1...1) entry e^{i*alpha}.  X case: the Z matrix conjugated
    by Hadamards on every leg.
    """
    if m + n < 1:
        raise ValueError("legless spider has no matrix; it is a scalar")
    if m + n > 16:
        raise TooLargeError(f"spider with {m + n} legs is beyond the dense budget")
    mat = np.zeros((2**n, 2**m), dtype=complex)
    mat[0, 0] = 1.0
    mat[-1, -1] = phase.exp()
    if kind is VertexKind.X:
        hn = _kron_power(_H, n)
        hm = _kron_power(_H, m)
        mat = hn @ mat @ hm
    elif kind is not VertexKind.Z:
        raise ValueError("spider kind must be Z or X")
    return mat


def _kron_power(m: np.ndarray, k: int) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for _ in range(k):
        out = np.kron(out, m)
    return out


def _einsum(*args) -> np.ndarray:
    """np.einsum in integer-label mode, with labels compacted into the
    valid range (numpy only allows labels below 52)."""
    remap: Dict[int, int] = {}
    fixed = []
    for item in args:
        if isinstance(item, np.ndarray):
            fixed.append(item)
        else:
            for i in item:
                if i not in remap:
                    remap[i] = len(remap)
            fixed.append([remap[i] for i in item])
    return np.asarray(np.einsum(*fixed))


def _vertex_tensor(kind: VertexKind, phase: Optional[Phase], deg: int) -> np.ndarray:
    if kind is VertexKind.H:
        return _H
    assert phase is not None
    if deg == 0:
        return np.asarray(1.0 + phase.exp(), dtype=complex)
    t = np.zeros((2,) * deg, dtype=complex)
    t[(0,) * deg] = 1.0
    t[(1,) * deg] = phase.exp()
    if kind is VertexKind.X:
        for ax in range(deg):
            t = np.moveaxis(np.tensordot(_H, t, axes=(1, ax)), 0, ax)
    return t


def evaluate(
    d: Diagram,
    max_legs: int = DEFAULT_MAX_LEGS,
    width_cap: int = DEFAULT_WIDTH_CAP,
    _order_rng=None,
) -> np.ndarray:
    """Contract a diagram to its matrix, scalar included.

    ``_order_rng`` (a ``random.Random``) randomises the contraction
    order; it exists so tests can confirm order independence.
    """
    d.check_validity()
    n_out, m_in = len(d.outputs), len(d.inputs)
    if n_out + m_in > max_legs:
        raise TooLargeError(f"{n_out + m_in} boundary legs exceed the budget of {max_legs}")
    if d.scalar.is_zero():
        return np.zeros((2**n_out, 2**m_in), dtype=complex)

    next_idx = 0
    endpoint_ids: Dict[int, List[int]] = {v: [] for v in d.vertex_ids()}
    tensors: List[Tuple[np.ndarray, List[int]]] = []
    boundary_open: Dict[int, int] = {}

    def is_b(v: int) -> bool:
        return d.kind(v) is VertexKind.B

    for u, v, mult in d.edges():
        for _ in range(mult):
            if u != v and is_b(u) and is_b(v):
                # a bare wire between two boundaries: explicit identity tensor
                i, j = next_idx, next_idx + 1
                next_idx += 2
                tensors.append((np.eye(2, dtype=complex), [i, j]))
                boundary_open[u] = i
                boundary_open[v] = j
                continue
            idx = next_idx
            next_idx += 1
            endpoint_ids[u].append(idx)
            if u != v:
                endpoint_ids[v].append(idx)
            else:
                endpoint_ids[u].append(idx)  # self-loop: both ends on u

    for v in d.vertex_ids():
        if is_b(v):
            if endpoint_ids[v]:
                boundary_open[v] = endpoint_ids[v][0]
            continue
        ids = endpoint_ids[v]
        if len(ids) > width_cap:
            raise TooLargeError(
                f"vertex of degree {len(ids)} exceeds the width cap {width_cap}"
            )
        t = _vertex_tensor(d.kind(v), d.vertex(v).phase, len(ids))
        if len(set(ids)) != len(ids):
            # trace out self-loops immediately
            uniq = sorted(set(ids), key=ids.index)
            keep = [i for i in uniq if ids.count(i) == 1]
            t = _einsum(t, ids, keep)
            ids = keep
        tensors.append((t, list(ids)))

    open_ids = set(boundary_open.values())

    def contract_pair(a: int, b: int) -> None:
        ta, ia = tensors[a]
        tb, ib = tensors[b]
        shared = set(ia) & set(ib)
        out = [i for i in ia if i not in shared] + [i for i in ib if i not in shared]
        if len(out) > width_cap:
            raise TooLargeError(f"intermediate tensor of rank {len(out)} exceeds width cap {width_cap}")
        tensors[a] = (_einsum(ta, ia, tb, ib, out), out)
        del tensors[b]

    while True:
        candidates = []
        for a in range(len(tensors)):
            ids_a = set(tensors[a][1])
            for b in range(a + 1, len(tensors)):
                shared = ids_a & set(tensors[b][1])
                if shared - open_ids:
                    rank = len(tensors[a][1]) + len(tensors[b][1]) - 2 * len(shared)
                    candidates.append((rank, a, b))
        if not candidates:
            break
        if _order_rng is not None:
            _, a, b = candidates[_order_rng.randrange(len(candidates))]
        else:
            _, a, b = min(candidates)
        contract_pair(a, b)

    # outer product of the remaining (disconnected) pieces
    while len(tensors) > 1:
        contract_pair(0, 1)

    if tensors:
        t, ids = tensors[0]
    else:
        t, ids = np.asarray(1.0, dtype=complex), []

    out_spec = [boundary_open[b] for b in d.outputs] + [boundary_open[b] for b in d.inputs]
    result = _einsum(t, ids, out_spec) if out_spec or ids else t
    return (d.scalar.value * result).reshape(2**n_out, 2**m_in)


def equal_up_to_scalar(
    a: np.ndarray, b: np.ndarray, tol: float = 1e-9
) -> Tuple[bool, Optional[complex]]:
    """Decide a = c*b for some nonzero c, entrywise within tol.

    Returns (True, c) on success, with c taken as the ratio at the
    largest-magnitude entry of b.  Two near-zero matrices compare equal
    with c undefined (None).  Dimension mismatch raises ValueError.
    """
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    bmax = float(np.max(np.abs(b))) if b.size else 0.0
    if amax <= tol and bmax <= tol:
        return True, None
    if amax <= tol or bmax <= tol:
        return False, None
    j = int(np.argmax(np.abs(b)))
    c = complex(a.flat[j] / b.flat[j])
    if abs(c) <= tol:
        return False, None
    if np.allclose(a, c * b, atol=tol, rtol=0.0):
        return True, c
    return False, None
