"""Subspace clustering: RANSAC, Hardt-Moitra based, and noiseless SCC."""
import itertools
import time
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import KMeans

from .errors import (InfeasiblePartitionError, InfeasibleSceneError, InvalidInputError,
                     SearchBudgetError)
from .linalg import DEFAULT_REL_TOL, dependent_mask, orthonormal_basis, residuals
from .recovery import RansacConfig, _points, draw_until_dependent, extract_dependent_subset
from .sampling import as_generator, sample_tuples

OUTLIER = 0
DEFAULT_SEARCH_BUDGET = 1_000_000
KMEANS_RESTARTS = 10


@dataclass(eq=False)
class ClusteringResult:
    subspaces: list
    labels: np.ndarray
    iterations: int
    elapsed: float
    stage_iterations: tuple = ()
    affinity: object = None


@dataclass(eq=False)
class AffinityMatrix:
    w: np.ndarray
    c: int
    tuples: np.ndarray = None


def _remaining_budget(cfg, used):
    if cfg.max_iterations is None:
        return None
    return cfg.max_iterations - used


def ransac_cluster(points, d, K, cfg=None, rng=None):
    """RANSAC clustering of K subspaces of common dimension ``d``.

    At each stage (d+1)-tuples of the remaining points are drawn until one
    is dependent; its span becomes a cluster and every remaining point on it
    is removed.  Points left at the end are outliers (label 0).
    """
    cfg = cfg or RansacConfig()
    x = _points(points)
    n, p = x.shape
    if not 1 <= d < p or K < 1:
        raise InvalidInputError(f"invalid d={d}, K={K} for p={p}")
    gen = as_generator(rng)
    start = time.perf_counter()
    labels = np.full(n, OUTLIER)
    remaining = np.arange(n)
    subspaces, stages = [], []
    for k in range(1, K + 1):
        if remaining.size < d + 1:
            raise InfeasibleSceneError(
                f"only {remaining.size} points left before subspace {k} of {K}")
        draw, it = draw_until_dependent(x[remaining], d + 1, cfg, gen,
                                        budget=_remaining_budget(cfg, sum(stages)))
        stages.append(it)
        s = orthonormal_basis(x[remaining[list(draw)]], cfg.rel_tol)
        on = residuals(x[remaining], s) <= cfg.membership_tol
        labels[remaining[on]] = k
        remaining = remaining[~on]
        subspaces.append(s)
    return ClusteringResult(subspaces, labels, sum(stages), time.perf_counter() - start, tuple(stages))


def minimum_dependent_subset(tuple_points, rel_tol=DEFAULT_REL_TOL, budget=DEFAULT_SEARCH_BUDGET):
    """Smallest linearly dependent subset of the rows of ``tuple_points``.

    Subsets are tried by increasing size, lexicographically within a size,
    and the first dependent one is returned.  Positions outside every
    circuit can never belong to a minimal dependent set, so the search runs
    over the circuit union only; combinations of a sorted index list keep
    the lexicographic order.  ``budget`` caps the number of subsets tested.
    A zero row would be dependent on its own and is rejected.
    """
    t = np.asarray(tuple_points, dtype=float)
    if t.ndim != 2:
        raise InvalidInputError("tuple must be a (q, p) array")
    norms = np.linalg.norm(t, axis=1)
    if norms.size and norms.min() <= rel_tol * norms.max():
        raise InvalidInputError("tuple contains a zero point")
    candidates = sorted(extract_dependent_subset(t, rel_tol))
    tested = 0
    for size in range(2, len(candidates) + 1):
        remaining = budget - tested
        if remaining <= 0:
            raise SearchBudgetError(f"no dependent subset within {budget} subsets")
        combos = itertools.combinations(candidates, size)
        for chunk in _chunks(combos, 4096):
            chunk = chunk[: budget - tested]
            tested += len(chunk)
            hits = np.flatnonzero(dependent_mask(t[chunk], rel_tol))
            if hits.size:
                return frozenset(int(i) for i in chunk[hits[0]])
            if tested >= budget:
                raise SearchBudgetError(f"no dependent subset within {budget} subsets")
    raise SearchBudgetError("no dependent subset found")


def _chunks(iterable, size):
    while True:
        block = list(itertools.islice(iterable, size))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def hm_cluster(points, K, cfg=None, rng=None, search_budget=DEFAULT_SEARCH_BUDGET):
    """Clustering built on the Hardt-Moitra sampler.

    Dimensions are neither inputs nor required to agree.  Each stage draws
    p-tuples of the remaining points until one is dependent, then keeps
    peeling off the smallest dependent subset of what is left of the tuple,
    emitting its span and removing the points on it, until the tuple is
    independent or K subspaces have been found.
    """
    cfg = cfg or RansacConfig()
    x = _points(points)
    n, p = x.shape
    if K < 1:
        raise InvalidInputError("K must be positive")
    gen = as_generator(rng)
    start = time.perf_counter()
    labels = np.full(n, OUTLIER)
    remaining = np.arange(n)
    subspaces, stages = [], []
    while len(subspaces) < K:
        if remaining.size <= p:
            raise InfeasibleSceneError(
                f"{remaining.size} points left but a {p}-tuple sampler needs more than {p}")
        draw, it = draw_until_dependent(x[remaining], p, cfg, gen,
                                        budget=_remaining_budget(cfg, sum(stages)))
        stages.append(it)
        members = remaining[list(draw)]
        while len(subspaces) < K and members.size and _dependent(x[members], cfg.rel_tol):
            local = sorted(minimum_dependent_subset(x[members], cfg.rel_tol, search_budget))
            s = orthonormal_basis(x[members[local]], cfg.rel_tol)
            on = residuals(x[remaining], s) <= cfg.membership_tol
            labels[remaining[on]] = len(subspaces) + 1
            subspaces.append(s)
            removed = remaining[on]
            remaining = remaining[~on]
            members = members[~np.isin(members, removed)]
    return ClusteringResult(subspaces, labels, sum(stages), time.perf_counter() - start, tuple(stages))


def _dependent(pts, rel_tol):
    return bool(dependent_mask(pts[None], rel_tol)[0])


def scc_affinity(points, d, c, rel_tol=DEFAULT_REL_TOL, rng=None, chunk_entries=1 << 22):
    """Noiseless spectral-curvature affinity.

    Draws ``c`` uniform d-subsets; ``W[i, j]`` counts the drawn subsets that
    contain neither i nor j and are linearly dependent together with x_i and
    also together with x_j.  The diagonal is zero.
    """
    x = _points(points)
    n, p = x.shape
    if c < 1 or d < 1 or n < d:
        raise InvalidInputError(f"invalid c={c}, d={d} for n={n}")
    gen = as_generator(rng)
    tuples = sample_tuples(n, d, c, gen)
    a = np.zeros((c, n), dtype=np.int64)
    step = max(1, chunk_entries // (n * (d + 1) * p))
    for lo in range(0, c, step):
        block = tuples[lo:lo + step]
        b = block.shape[0]
        stack = np.empty((b, n, d + 1, p))
        stack[:, :, 0, :] = x[None, :, :]
        stack[:, :, 1:, :] = x[block][:, None, :, :]
        dep = dependent_mask(stack.reshape(b * n, d + 1, p), rel_tol).reshape(b, n)
        a[lo:lo + b] = dep
    # a point is trivially dependent with a tuple that contains it
    a[np.arange(c)[:, None], tuples] = 0
    w = a.T @ a
    np.fill_diagonal(w, 0)
    return AffinityMatrix(w, c, tuples)


def spectral_partition(w, K, seed=0):
    """Partition the nodes of an affinity graph into K groups.

    Nodes with zero degree are labeled 0 (outlier).  The rest are embedded
    with the top-K eigenvectors of ``D^-1/2 W D^-1/2``, rows scaled to unit
    length, and grouped with k-means (10 seeded restarts, lowest inertia).
    Labels run from 1 to K.
    """
    if isinstance(w, AffinityMatrix):
        w = w.w
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InvalidInputError("affinity must be a square matrix")
    if K < 1:
        raise InvalidInputError("K must be positive")
    deg = w.sum(axis=1)
    active = np.flatnonzero(deg > 0)
    if active.size < K:
        raise InfeasiblePartitionError(f"{active.size} connected points for K={K}")
    labels = np.full(w.shape[0], OUTLIER)
    sub = w[np.ix_(active, active)]
    dinv = 1.0 / np.sqrt(deg[active])
    m = dinv[:, None] * sub * dinv[None, :]
    _, vecs = np.linalg.eigh((m + m.T) / 2)
    emb = vecs[:, -K:]
    emb = emb / np.linalg.norm(emb, axis=1, keepdims=True)
    km = KMeans(n_clusters=K, n_init=KMEANS_RESTARTS, random_state=seed).fit(emb)
    labels[active] = km.labels_ + 1
    return labels


def scc_cluster(points, d, K, c, cfg=None, rng=None):
    """Noiseless SCC: affinity from ``c`` random d-tuples, then spectral partitioning."""
    cfg = cfg or RansacConfig()
    gen = as_generator(rng)
    start = time.perf_counter()
    aff = scc_affinity(points, d, c, cfg.rel_tol, gen)
    labels = spectral_partition(aff, K, seed=int(gen.integers(2 ** 31)))
    x = _points(points)
    subspaces = []
    for k in range(1, K + 1):
        members = np.flatnonzero(labels == k)
        subspaces.append(orthonormal_basis(x[members], cfg.rel_tol) if members.size else None)
    return ClusteringResult(subspaces, labels, c, time.perf_counter() - start, (c,), aff)


def pure_tuple_counts(tuples, truth_labels, K):
    """How many drawn tuples lie entirely on each true subspace."""
    lab = np.asarray(truth_labels)[tuples]
    pure = (lab == lab[:, :1]).all(axis=1) & (lab[:, 0] != OUTLIER)
    return np.array([int(np.count_nonzero(pure & (lab[:, 0] == k))) for k in range(1, K + 1)])
