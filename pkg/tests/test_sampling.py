import itertools
from math import comb, sqrt

import numpy as np
import pytest
from scipy import stats

from ransac_subspace.errors import ExhaustedSamplerError, InvalidInputError
from ransac_subspace.sampling import (RngStream, as_generator, sample_tuple,
                                      sample_tuple_without_replacement, sample_tuples)


def subset_codes(draws, n):
    """Map each sorted subset to its rank among all subsets, for counting."""
    index = {c: i for i, c in enumerate(itertools.combinations(range(n), draws.shape[1]))}
    return np.array([index[tuple(r)] for r in draws.tolist()])


def test_stream_reproducible():
    a = RngStream(7, 3).generator().integers(0, 2 ** 63, size=50)
    b = RngStream(7, 3).generator().integers(0, 2 ** 63, size=50)
    assert np.array_equal(a, b)


def test_streams_differ_and_are_uncorrelated():
    a = RngStream(7, 0).generator().random(100_000)
    b = RngStream(7, 1).generator().random(100_000)
    assert not np.array_equal(a, b)
    r = np.corrcoef(a, b)[0, 1]
    assert abs(r) < 3 / sqrt(a.size)


def test_stream_validates_range():
    with pytest.raises(InvalidInputError):
        RngStream(-1)
    with pytest.raises(InvalidInputError):
        RngStream(0, 2 ** 64)
    RngStream(2 ** 64 - 1, 2 ** 64 - 1).generator()


def test_as_generator_passthrough():
    g = np.random.default_rng(0)
    assert as_generator(g) is g


def test_only_subset():
    assert sample_tuple(3, 3, RngStream(0)) == (0, 1, 2)


def test_q_larger_than_n():
    with pytest.raises(InvalidInputError):
        sample_tuple(2, 3, RngStream(0))


def test_draws_sorted_distinct_in_range():
    draws = sample_tuples(20, 6, 5000, RngStream(1))
    assert np.all(np.diff(draws, axis=1) > 0)
    assert draws.min() >= 0 and draws.max() < 20


def test_single_element_frequency():
    draws = sample_tuples(2, 1, 100_000, RngStream(2))
    freq = np.mean(draws[:, 0] == 0)
    sigma = sqrt(0.25 / 100_000)
    assert abs(freq - 0.5) <= 3 * sigma


def test_pairs_of_five_frequencies():
    n_draws = 100_000
    codes = subset_codes(sample_tuples(5, 2, n_draws, RngStream(3)), 5)
    freq = np.bincount(codes, minlength=10) / n_draws
    sigma = sqrt(0.1 * 0.9 / n_draws)
    assert np.all(np.abs(freq - 0.1) <= 3 * sigma)
    _, pval = stats.chisquare(np.bincount(codes, minlength=10))
    assert pval > 0.001


@pytest.mark.parametrize("n,q", [(6, 2), (7, 3)])
def test_uniformity_chi_square(n, q):
    draws = sample_tuples(n, q, 1_000_000, RngStream(11, q))
    counts = np.bincount(subset_codes(draws, n), minlength=comb(n, q))
    _, pval = stats.chisquare(counts)
    assert pval > 0.001


def test_same_stream_same_sequence():
    a = sample_tuples(30, 4, 1000, RngStream(5, 9))
    b = sample_tuples(30, 4, 1000, RngStream(5, 9))
    assert np.array_equal(a, b)


class TestWithoutReplacement:
    def test_forced_last_subset(self):
        seen = {(0, 1), (0, 2)}
        assert sample_tuple_without_replacement(3, 2, seen, RngStream(0)) == (1, 2)

    def test_exhaustion_covers_everything_once(self):
        gen = RngStream(4).generator()
        seen = set()
        for _ in range(6):
            seen.add(sample_tuple_without_replacement(4, 2, seen, gen))
        assert seen == set(itertools.combinations(range(4), 2))
        with pytest.raises(ExhaustedSamplerError):
            sample_tuple_without_replacement(4, 2, seen, gen)

    @pytest.mark.parametrize("n,q", [(n, q) for n in range(1, 9) for q in range(1, min(n, 3) + 1)])
    def test_never_repeats(self, n, q):
        gen = RngStream(n, q).generator()
        seen, order = set(), []
        for _ in range(comb(n, q)):
            t = sample_tuple_without_replacement(n, q, seen, gen)
            assert t not in seen
            seen.add(t)
            order.append(t)
        assert len(order) == comb(n, q)

    def test_draws_until_target_negative_hypergeometric(self):
        n, q, trials = 10, 3, 2000
        total = comb(n, q)
        target = (2, 5, 7)
        gen = RngStream(21).generator()
        counts = []
        for _ in range(trials):
            seen = set()
            while True:
                t = sample_tuple_without_replacement(n, q, seen, gen)
                seen.add(t)
                if t == target:
                    counts.append(len(seen))
                    break
        mean = (total + 1) / 2
        assert mean == 60.5
        # position of one item in a uniform permutation of 120: discrete uniform on 1..120
        sd = sqrt((total ** 2 - 1) / 12)
        assert abs(np.mean(counts) - mean) <= 3 * sd / sqrt(trials)
