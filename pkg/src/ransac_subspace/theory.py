"""Closed-form iteration complexity of the RANSAC-type algorithms.

Binomial coefficients are handled in log space so that values such as
C(150, 19) never overflow.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


class NoSubspaceWarning(UserWarning):
    """Fewer than d+1 inliers: no tuple can ever be dependent."""


@dataclass(frozen=True)
class TheoryParams:
    """Scene parameters (d, p, m, m0, K); the sample size is n = K*m + m0."""

    d: int
    p: int
    m: int
    m0: int = 0
    K: int = 1

    def __post_init__(self):
        if not 1 <= self.d < self.p:
            raise InvalidInputError(f"need 1 <= d < p, got d={self.d}, p={self.p}")
        if self.m < self.d + 1:
            raise InvalidInputError(f"need m >= d+1, got m={self.m}, d={self.d}")
        if self.m0 < 0 or self.K < 1:
            raise InvalidInputError("need m0 >= 0 and K >= 1")

    @property
    def n(self):
        return self.K * self.m + self.m0

    def as_tuple(self):
        return (self.d, self.p, self.K, self.m, self.m0)


def log_binom(n, k):
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def theta1(n, m, d):
    """Probability that a uniform (d+1)-subset of n points is all inliers."""
    if not 0 <= m <= n or d < 0:
        raise InvalidInputError(f"invalid (n, m, d) = {(n, m, d)}")
    if m < d + 1:
        warnings.warn(f"m={m} < d+1={d + 1}: no dependent tuple exists", NoSubspaceWarning, stacklevel=2)
        return 0.0
    return min(1.0, math.exp(log_binom(m, d + 1) - log_binom(n, d + 1)))


def theta2(n, m, d, p):
    """Probability that a uniform p-subset holds at least d+1 inliers.

    Upper tail of the hypergeometric law, summed over the feasible range
    ``max(d+1, p-(n-m)) <= k <= min(p, m)``.
    """
    if p >= n:
        raise InvalidInputError(f"need n > p, got n={n}, p={p}")
    if not 0 <= m <= n or d < 0:
        raise InvalidInputError(f"invalid (n, m, d, p) = {(n, m, d, p)}")
    lo, hi = max(d + 1, p - (n - m)), min(p, m)
    if lo > hi:
        return 0.0
    upper = _log_hypergeom_terms(n, m, p, lo, hi)
    floor = max(0, p - (n - m))
    lower = _log_hypergeom_terms(n, m, p, floor, lo - 1)
    # sum the smaller tail so values close to 1 keep full relative accuracy
    if lower.size and lower.max() < upper.max():
        return max(0.0, 1.0 - _sum_exp(lower))
    return min(1.0, _sum_exp(upper))


def _log_hypergeom_terms(n, m, p, lo, hi):
    total = log_binom(n, p)
    return np.array([log_binom(m, k) + log_binom(n - m, p - k) - total for k in range(lo, hi + 1)])


def _sum_exp(logs):
    top = logs.max()
    return math.exp(top) * math.fsum(np.exp(logs - top))


def expected_iterations_recovery(n, m, d):
    """Mean of the geometric iteration count, 1/theta1; ``inf`` if theta1 = 0."""
    t = theta1(n, m, d)
    return math.inf if t == 0.0 else 1.0 / t


def expected_iterations_hm(n, m, d, p):
    t = theta2(n, m, d, p)
    return math.inf if t == 0.0 else 1.0 / t


def negative_hypergeometric_mean(n, m, d):
    """Mean draws until the first all-inlier tuple when tuples are never repeated."""
    total, good = math.comb(n, d + 1), math.comb(m, d + 1)
    return (total + 1) / (good + 1)


def worst_case_iterations_without_replacement(n, m, d):
    """Every non-inlier tuple drawn first, then one all-inlier tuple."""
    return math.comb(n, d + 1) - math.comb(m, d + 1) + 1


def stage_probabilities(params):
    """Success probability of each stage of RANSAC clustering.

    At stage j the data holds K-j+1 intact subspaces and all outliers, so the
    chance that a (d+1)-tuple lies on one of them is
    ``(K-j+1) C(m, d+1) / C(n-(j-1)m, d+1)``.
    """
    n, m, d, K = params.n, params.m, params.d, params.K
    probs = []
    for j in range(1, K + 1):
        remaining = n - (j - 1) * m
        lp = math.log(K - j + 1) + log_binom(m, d + 1) - log_binom(remaining, d + 1)
        probs.append(min(1.0, math.exp(lp)))
    return probs


@dataclass(frozen=True)
class ClusteringExpectation:
    expected: float
    bound: float
    stage_means: tuple


def expected_iterations_clustering(params):
    """Expected total RANSAC clustering iterations and the bound K/theta1."""
    if not isinstance(params, TheoryParams):
        raise InvalidInputError("expected TheoryParams")
    stages = tuple(1.0 / q for q in stage_probabilities(params))
    expected = math.fsum(stages)
    bound = params.K / theta1(params.n, params.m, params.d)
    assert expected <= bound * (1 + 1e-12), (expected, bound)
    return ClusteringExpectation(expected, bound, stages)


@dataclass(frozen=True)
class GeometricFitReport:
    mean_z: float
    var_z: float
    passed: bool
    sample_mean: float
    sample_var: float

    def __bool__(self):
        return self.passed


def _z(diff, se):
    if se > 0:
        return diff / se
    return 0.0 if diff == 0 else math.copysign(math.inf, diff)


def geometric_fit_test(samples, theta, z_max=3.0):
    """Compare samples with a geometric law on {1, 2, ...}.

    Mean and variance are turned into z-scores using the standard errors
    implied by the hypothesised law: ``var/N`` for the mean and
    ``(mu4 - var^2)/N`` for the sample variance, where ``mu4`` is the fourth
    central moment ``var^2 (9 + theta^2/(1-theta))``.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise InvalidInputError("no samples")
    if not 0 < theta <= 1:
        raise InvalidInputError(f"theta must lie in (0, 1], got {theta}")
    n = x.size
    mean = float(x.mean())
    var = float(x.var(ddof=1)) if n > 1 else 0.0
    mu = 1.0 / theta
    sigma2 = (1.0 - theta) / theta ** 2
    if theta < 1:
        mu4 = sigma2 ** 2 * (9.0 + theta ** 2 / (1.0 - theta))
    else:
        mu4 = 0.0
    mean_z = _z(mean - mu, math.sqrt(sigma2 / n))
    var_z = _z(var - sigma2, math.sqrt(max(mu4 - sigma2 ** 2, 0.0) / n))
    passed = abs(mean_z) <= z_max and abs(var_z) <= z_max
    return GeometricFitReport(mean_z, var_z, passed, mean, var)
