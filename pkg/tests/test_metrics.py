import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ransac_subspace.errors import InvalidInputError
from ransac_subspace.linalg import Subspace, orthonormal_basis
from ransac_subspace.metrics import rand_index, recovery_angle

import oracles

e1, e2, e3 = np.eye(3)


def span(*v):
    return orthonormal_basis(np.array(v))


class TestRecoveryAngle:
    def test_identical(self):
        s = orthonormal_basis(np.random.default_rng(0).standard_normal((3, 8)))
        assert recovery_angle(s, s) <= 1e-10

    def test_orthogonal_lines(self):
        assert recovery_angle(span(e1), span(e2)) == pytest.approx(math.pi / 2)

    def test_quarter_turn_plane(self):
        # cosines of the principal angles are 1 and 1/sqrt(2)
        got = recovery_angle(span(e1, e2), span(e1, (e2 + e3) / math.sqrt(2)))
        assert got == pytest.approx(math.acos(1 / math.sqrt(2)), abs=1e-14)
        assert got == pytest.approx(math.pi / 4)

    def test_largest_not_smallest(self):
        assert recovery_angle(span(e1, e2), span(e1, e3)) == pytest.approx(math.pi / 2)

    def test_unequal_dimensions(self):
        assert recovery_angle(span(e1), span(e1, e2)) == math.pi / 2

    def test_ambient_mismatch(self):
        with pytest.raises(InvalidInputError):
            recovery_angle(span(e1), Subspace(np.eye(4)[:, :1]))


class TestRandIndex:
    def test_identical(self):
        assert rand_index([1, 1, 2, 0], [1, 1, 2, 0]) == 1.0

    def test_crossed(self):
        a, b = [1, 1, 2, 2], [1, 2, 1, 2]
        assert oracles.rand_index_pairs(a, b) == pytest.approx(2 / 6)
        assert rand_index(a, b) == pytest.approx(2 / 6)

    def test_permutation(self):
        assert rand_index([1, 1, 2, 3, 0], [3, 3, 1, 2, 0]) == 1.0

    def test_outliers_are_a_class(self):
        a, b = [0, 0, 1, 1], [1, 1, 0, 0]
        assert rand_index(a, b) == 1.0

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            rand_index([1, 2], [1])
        with pytest.raises(InvalidInputError):
            rand_index([1], [1])

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=300, deadline=None)
    def test_matches_pairs_symmetric_and_relabel_invariant(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 51))
        a = rng.integers(0, 5, n)
        b = rng.integers(0, 5, n)
        ri = rand_index(a, b)
        assert ri == pytest.approx(oracles.rand_index_pairs(a.tolist(), b.tolist()), abs=1e-12)
        assert ri == rand_index(b, a)
        perm = rng.permutation(10)
        assert rand_index(perm[a], b) == ri
        assert rand_index(a, perm[b] + 7) == ri
