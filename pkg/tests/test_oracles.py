"""Sanity checks of the reference implementations themselves."""
import numpy as np

import oracles


def test_int_rank_matches_rational_rank():
    rng = np.random.default_rng(8)
    for _ in range(2000):
        r, c = rng.integers(1, 7, size=2)
        a = rng.integers(-3, 4, size=(r, c))
        if rng.random() < 0.5 and r > 1:
            a[0] = a[1] * 2 - a[-1]
        assert oracles.int_rank(a.tolist()) == oracles.exact_rank(a.tolist())


def test_circuit_union_equals_non_coloops():
    rng = np.random.default_rng(9)
    for _ in range(300):
        q, p = int(rng.integers(2, 7)), int(rng.integers(2, 6))
        a = rng.integers(-2, 3, size=(q, p))
        assert oracles.circuit_union(a.tolist()) == oracles.non_coloops(a.tolist())


def test_theta2_enumeration_matches_formula():
    assert oracles.theta2_enumerate(10, 5, 2, 4) == oracles.theta2_exact(10, 5, 2, 4)
    assert oracles.theta2_enumerate(4, 3, 1, 3) == 1
