import random

import numpy as np
import pytest

from zxopt import (
    Diagram,
    Phase,
    TooLargeError,
    VertexKind,
    equal_up_to_scalar,
    evaluate,
    identity,
    spider,
    spider_matrix,
)

from helpers import brute_force_eval, random_diagram

Z, X = VertexKind.Z, VertexKind.X


def test_z_spider_matrix_corner_form():
    m = spider_matrix(Z, Phase.exact(1, 3), 2, 1)
    expect = np.zeros((2, 4), dtype=complex)
    expect[0, 0] = 1.0
    expect[1, 3] = np.exp(1j * np.pi / 3)
    assert np.allclose(m, expect, atol=1e-15)


def test_x_spider_identity_case():
    assert np.allclose(spider_matrix(X, Phase.zero(), 1, 1), np.eye(2), atol=1e-15)


def test_z_merge_map():
    m = spider_matrix(Z, Phase.zero(), 2, 1)
    expect = np.zeros((2, 4))
    expect[0, 0] = 1.0
    expect[1, 3] = 1.0
    assert np.allclose(m, expect, atol=1e-15)


def test_eval_matches_spider_matrix_exactly():
    rng = random.Random(11)
    for _ in range(40):
        kind = rng.choice([Z, X])
        m, n = rng.randint(0, 2), rng.randint(0, 2)
        if m + n == 0:
            continue
        phase = Phase.exact(rng.randrange(8), 4)
        d = spider(kind, phase, m, n)
        # Z spiders agree bit-exactly; X spiders go through a different
        # float path (per-axis tensordot vs kron products), so allow ulps
        assert np.max(np.abs(evaluate(d) - spider_matrix(kind, phase, m, n))) < 1e-14


def test_eval_against_brute_force():
    rng = random.Random(12)
    checked = 0
    while checked < 40:
        d = random_diagram(rng, max_spiders=4, max_legs=4)
        if sum(m for _, _, m in d.edges()) > 10:
            continue
        checked += 1
        assert np.max(np.abs(evaluate(d) - brute_force_eval(d))) < 1e-10


def test_eval_leg_budget():
    with pytest.raises(TooLargeError):
        evaluate(identity(7), max_legs=12)
    assert evaluate(identity(6), max_legs=12).shape == (64, 64)


def test_eval_zero_scalar_short_circuit():
    d = spider(Z, Phase.zero(), 1, 1)
    d.scalar = d.scalar.times(0.0)
    assert not evaluate(d).any()


def test_eval_contraction_order_independence():
    rng = random.Random(13)
    for trial in range(25):
        d = random_diagram(rng, max_spiders=6, max_legs=4)
        ref = evaluate(d)
        for seed in range(3):
            alt = evaluate(d, _order_rng=random.Random(seed * 101 + trial))
            assert np.max(np.abs(ref - alt)) < 1e-10


def test_eval_isomorphism_invariance():
    rng = random.Random(14)
    for _ in range(15):
        d = random_diagram(rng, max_spiders=5, max_legs=4)
        ids = d.vertex_ids()
        images = list(range(500, 500 + len(ids)))
        rng.shuffle(images)
        d2 = d.relabelled(dict(zip(ids, images)))
        assert np.max(np.abs(evaluate(d) - evaluate(d2))) == 0.0


def test_eval_width_cap_fails_cleanly():
    d = Diagram()
    hub = d.add_vertex(Z, Phase.zero())
    for i in range(10):
        b = d.add_vertex(VertexKind.B)
        d.add_edge(b, hub)
        (d.inputs if i < 5 else d.outputs).append(b)
    with pytest.raises(TooLargeError):
        evaluate(d, max_legs=12, width_cap=6)


# -- equal_up_to_scalar -------------------------------------------------------

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def test_scalar_multiple_detected():
    ok, c = equal_up_to_scalar(2.0 * CNOT, CNOT, 1e-9)
    assert ok and c == pytest.approx(2.0)


def test_euler_scalar_witness():
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    zxz = (
        np.diag([1, 1j]).astype(complex)
        @ (h @ np.diag([1, 1j]) @ h)
        @ np.diag([1, 1j]).astype(complex)
    )
    ok, c = equal_up_to_scalar(h, zxz, 1e-9)
    assert ok and abs(c - np.exp(-1j * np.pi / 4)) < 1e-12


def test_distinct_permutations_not_equal():
    ok, _ = equal_up_to_scalar(CNOT, SWAP, 1e-9)
    assert not ok


def test_zero_matrix_handling():
    z = np.zeros((2, 2), dtype=complex)
    ok, c = equal_up_to_scalar(z, z, 1e-9)
    assert ok and c is None
    ok, _ = equal_up_to_scalar(z, np.eye(2, dtype=complex), 1e-9)
    assert not ok
    ok, _ = equal_up_to_scalar(np.eye(2, dtype=complex), z, 1e-9)
    assert not ok


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        equal_up_to_scalar(np.eye(2, dtype=complex), np.eye(4, dtype=complex))
