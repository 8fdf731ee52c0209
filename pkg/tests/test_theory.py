import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from ransac_subspace import theory
from ransac_subspace.errors import InvalidInputError
from ransac_subspace.theory import (NoSubspaceWarning, TheoryParams, expected_iterations_clustering,
                                    expected_iterations_recovery, geometric_fit_test, theta1, theta2)

import oracles


def rel_err(a, b):
    return abs(a - b) / abs(b)


class TestTheta1:
    def test_all_inliers(self):
        assert theta1(7, 7, 3) == 1.0

    def test_small_case(self):
        expected = comb(5, 2) / comb(10, 2)
        assert expected == pytest.approx(10 / 45)
        assert theta1(10, 5, 1) == pytest.approx(expected, rel=1e-14)

    def test_table1_scale(self):
        exact = Fraction(comb(150, 19), comb(100, 19))
        assert rel_err(1 / theta1(150, 100, 18), float(exact)) <= 1e-10

    def test_no_subspace(self):
        with pytest.warns(NoSubspaceWarning):
            assert theta1(10, 2, 2) == 0.0
        with pytest.warns(NoSubspaceWarning):
            assert expected_iterations_recovery(10, 2, 2) == math.inf

    def test_matches_exact_up_to_200(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            n = int(rng.integers(2, 201))
            d = int(rng.integers(0, min(n - 1, 40)))
            m = int(rng.integers(d + 1, n + 1))
            exact = float(oracles.theta1_exact(n, m, d))
            assert rel_err(theta1(n, m, d), exact) <= 1e-10

    def test_monotone(self):
        vals_n = [theta1(n, 20, 3) for n in range(20, 80)]
        vals_m = [theta1(80, m, 3) for m in range(4, 81)]
        assert all(a >= b for a, b in zip(vals_n, vals_n[1:]))
        assert all(a <= b for a, b in zip(vals_m, vals_m[1:]))


class TestTheta2:
    def test_all_inliers(self):
        assert theta2(12, 12, 2, 5) == 1.0

    def test_enumerated_small(self):
        assert oracles.theta2_enumerate(4, 3, 1, 3) == 1
        assert theta2(4, 3, 1, 3) == pytest.approx(1.0, abs=1e-15)

    def test_enumerated_ten_four(self):
        exact = oracles.theta2_enumerate(10, 5, 2, 4)
        assert theta2(10, 5, 2, 4) == pytest.approx(float(exact), rel=1e-12)

    def test_needs_n_greater_than_p(self):
        with pytest.raises(InvalidInputError):
            theta2(5, 3, 1, 5)

    def test_matches_exact_up_to_200(self):
        rng = np.random.default_rng(2)
        for _ in range(2000):
            n = int(rng.integers(3, 201))
            p = int(rng.integers(2, n))
            d = int(rng.integers(1, p))
            m = int(rng.integers(d + 1, n + 1))
            exact = oracles.theta2_exact(n, m, d, p)
            if exact == 0:
                assert theta2(n, m, d, p) == 0.0
            else:
                assert rel_err(theta2(n, m, d, p), float(exact)) <= 1e-10

    def test_monotone_directions(self):
        for n in range(4, 61, 3):
            for p in range(2, n, 3):
                vals_m = [theta2(n, m, 1, p) for m in range(2, n + 1)]
                assert all(a <= b + 1e-12 for a, b in zip(vals_m, vals_m[1:]))
                m = max(2, n // 2)
                vals_d = [theta2(n, m, d, p) for d in range(1, p)]
                assert all(a >= b - 1e-12 for a, b in zip(vals_d, vals_d[1:]))

    @pytest.mark.parametrize("n", [40, 80, 160, 320])
    def test_bounded_away_from_zero_in_balanced_regime(self, n):
        m = p = n // 2
        d = p // 2
        assert m / n >= d / p
        assert theta2(n, m, d, p) >= 0.3


class TestExpectations:
    def test_recovery(self):
        assert expected_iterations_recovery(9, 9, 2) == 1.0
        assert expected_iterations_recovery(10, 5, 1) == pytest.approx(4.5)

    def test_asymptotic_order(self):
        ratio = expected_iterations_recovery(1000, 500, 2) / 2.0 ** 3
        assert 0.98 <= ratio <= 1.01

    def test_clustering_single_subspace(self):
        params = TheoryParams(d=3, p=8, m=30, m0=20)
        assert expected_iterations_clustering(params).expected == pytest.approx(
            expected_iterations_recovery(50, 30, 3))

    def test_clustering_two_lines(self):
        res = expected_iterations_clustering(TheoryParams(d=1, p=3, m=5, m0=0, K=2))
        # stage 1: 2*C(5,2)/C(10,2) = 4/9, stage 2: C(5,2)/C(5,2) = 1
        assert res.stage_means == pytest.approx((9 / 4, 1.0))
        assert res.expected == pytest.approx(3.25)
        assert res.bound == pytest.approx(2 / (10 / 45))

    def test_clustering_bound_everywhere(self):
        for d in range(1, 5):
            for K in range(1, 5):
                for m0 in (0, 10, 50):
                    params = TheoryParams(d=d, p=d + 3, m=d + 6, m0=m0, K=K)
                    res = expected_iterations_clustering(params)
                    assert res.expected <= res.bound * (1 + 1e-12)

    def test_negative_hypergeometric(self):
        assert theory.negative_hypergeometric_mean(10, 5, 1) == pytest.approx(46 / 11)
        assert theory.negative_hypergeometric_mean(10, 5, 1) <= expected_iterations_recovery(10, 5, 1)

    def test_worst_case_without_replacement(self):
        assert theory.worst_case_iterations_without_replacement(10, 5, 1) == 45 - 10 + 1

    def test_params_validation(self):
        with pytest.raises(InvalidInputError):
            TheoryParams(d=3, p=3, m=10)
        with pytest.raises(InvalidInputError):
            TheoryParams(d=2, p=5, m=2)
        assert TheoryParams(d=4, p=8, m=50, m0=50, K=3).n == 200


class TestGeometricFit:
    def test_degenerate_all_ones(self):
        assert geometric_fit_test([1] * 200, 1.0).passed

    def _draws(self, theta, size, seed):
        u = np.random.default_rng(seed).random(size)
        return [oracles.geometric_inverse_cdf(x, theta) for x in u]

    def test_accepts_true_law(self):
        report = geometric_fit_test(self._draws(0.3, 100_000, 0), 0.3)
        assert report.passed, report

    def test_rejects_wrong_law(self):
        report = geometric_fit_test(self._draws(0.3, 100_000, 1), 0.5)
        assert not report.passed
        assert abs(report.mean_z) > 3

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            geometric_fit_test([], 0.5)
