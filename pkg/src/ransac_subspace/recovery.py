"""Subspace recovery: RANSAC, Hardt-Moitra, and RANSAC with unknown dimension."""
import time
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import BudgetExhaustedError, ContractViolationError, InvalidInputError
from .linalg import (DEFAULT_REL_TOL, MEMBERSHIP_TOL, dependent_mask, numerical_rank,
                     orthonormal_basis, residuals)
from .sampling import as_generator, sample_tuple_without_replacement, sample_tuples

WITH = "with"
WITHOUT = "without"

# float64 entries per batched SVD call
_BATCH_ENTRIES = 1 << 21
_MAX_BATCH = 4096


@dataclass(frozen=True)
class RansacConfig:
    rel_tol: float = DEFAULT_REL_TOL
    membership_tol: float = MEMBERSHIP_TOL
    max_iterations: int = None
    replacement_mode: str = WITH

    def __post_init__(self):
        if self.rel_tol <= 0 or self.membership_tol <= 0:
            raise InvalidInputError("tolerances must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be a positive integer")
        if self.replacement_mode not in (WITH, WITHOUT):
            raise InvalidInputError(f"replacement_mode must be 'with' or 'without', got {self.replacement_mode!r}")


@dataclass(eq=False)
class RecoveryResult:
    subspace: object
    inlier_indices: np.ndarray
    iterations: int
    elapsed: float
    tuple_indices: tuple = ()


def _points(points):
    x = np.asarray(points, dtype=float)
    if x.ndim != 2:
        raise InvalidInputError("points must be an (n, p) array")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("points have non-finite entries")
    return x


def draw_until_dependent(points, q, cfg, rng, budget=None):
    """Sample q-tuples of the rows of ``points`` until one is dependent.

    Returns ``(tuple_indices, iterations)``.  One iteration is one draw plus
    one dependence test.  With replacement the draws are generated and
    tested in batches that grow geometrically; the counted iterations are
    those up to and including the first dependent tuple, so the count has
    exactly the law of the one-at-a-time loop.  ``budget`` caps the count
    and defaults to ``cfg.max_iterations`` (or C(n, q) without replacement).
    """
    n, p = points.shape
    if not 1 <= q <= n:
        raise InvalidInputError(f"cannot draw {q}-tuples from {n} points")
    if budget is None:
        budget = cfg.max_iterations
    if cfg.replacement_mode == WITHOUT:
        total = comb(n, q)
        budget = total if budget is None else min(budget, total)
        seen = set()
        while len(seen) < budget:
            draw = sample_tuple_without_replacement(n, q, seen, rng)
            seen.add(draw)
            if dependent_mask(points[list(draw)][None], cfg.rel_tol)[0]:
                return draw, len(seen)
        raise BudgetExhaustedError(len(seen))

    cap = max(1, min(_MAX_BATCH, _BATCH_ENTRIES // (q * p)))
    batch, done = 1, 0
    while budget is None or done < budget:
        size = batch if budget is None else min(batch, budget - done)
        idx = sample_tuples(n, q, size, rng)
        hits = np.flatnonzero(dependent_mask(points[idx], cfg.rel_tol))
        if hits.size:
            first = int(hits[0])
            return tuple(int(i) for i in idx[first]), done + first + 1
        done += size
        batch = min(2 * batch, cap)
    raise BudgetExhaustedError(done)


def ransac_recover(points, d, cfg=None, rng=None):
    """RANSAC for one subspace of known dimension ``d``.

    Draws (d+1)-tuples until one is linearly dependent and returns its span,
    together with every point lying on that span.
    """
    cfg = cfg or RansacConfig()
    x = _points(points)
    n, p = x.shape
    if not 1 <= d < p:
        raise InvalidInputError(f"need 1 <= d < p, got d={d}, p={p}")
    if n < d + 1:
        raise InvalidInputError(f"need at least d+1={d + 1} points, got {n}")
    gen = as_generator(rng)
    start = time.perf_counter()
    draw, iterations = draw_until_dependent(x, d + 1, cfg, gen)
    subspace = orthonormal_basis(x[list(draw)], cfg.rel_tol)
    inliers = np.flatnonzero(residuals(x, subspace) <= cfg.membership_tol)
    return RecoveryResult(subspace, inliers, iterations, time.perf_counter() - start, draw)


def extract_dependent_subset(tuple_points, rel_tol=DEFAULT_REL_TOL):
    """Positions of a dependent tuple that take part in some linear relation.

    The null space of the ``p x q`` matrix whose columns are the points is
    computed by SVD; a position is kept when its coefficient in any null
    space basis vector exceeds ``rel_tol`` times that vector's largest
    coefficient.  The result is the union of all circuits of the tuple.
    """
    t = np.asarray(tuple_points, dtype=float)
    if t.ndim != 2:
        raise InvalidInputError("tuple must be a (q, p) array")
    q = t.shape[0]
    r = numerical_rank(t, rel_tol)
    if r >= q:
        raise ContractViolationError("tuple is numerically full rank")
    _, _, vt = np.linalg.svd(t.T, full_matrices=True)
    null = vt[r:]
    scale = np.abs(null).max(axis=1, keepdims=True)
    support = (np.abs(null) > rel_tol * scale).any(axis=0)
    return frozenset(int(i) for i in np.flatnonzero(support))


def hardt_moitra_recover(points, cfg=None, rng=None):
    """Hardt-Moitra recovery: draw p-tuples until one is dependent.

    The dimension is not an input; the returned subspace is the span of the
    dependent part of the tuple.
    """
    cfg = cfg or RansacConfig()
    x = _points(points)
    n, p = x.shape
    if n <= p:
        raise InvalidInputError(f"Hardt-Moitra needs n > p, got n={n}, p={p}")
    gen = as_generator(rng)
    start = time.perf_counter()
    draw, iterations = draw_until_dependent(x, p, cfg, gen)
    local = sorted(extract_dependent_subset(x[list(draw)], cfg.rel_tol))
    subspace = orthonormal_basis(x[[draw[i] for i in local]], cfg.rel_tol)
    inliers = np.flatnonzero(residuals(x, subspace) <= cfg.membership_tol)
    return RecoveryResult(subspace, inliers, iterations, time.perf_counter() - start, draw)


def ransac_recover_unknown_d(points, budget, cfg=None, rng=None):
    """RANSAC when the dimension is unknown.

    Tries d = 1, 2, ..., p-1 with at most ``budget`` iterations each and
    starts over at d = 1 after a full sweep.  ``cfg.max_iterations`` caps
    the total over all attempts.  A dependent tuple found at a dimension
    above the true one also holds points off the subspace, so the returned
    span is that of the dependent part of the tuple.
    """
    cfg = cfg or RansacConfig()
    if budget < 1:
        raise InvalidInputError("budget must be positive")
    x = _points(points)
    n, p = x.shape
    gen = as_generator(rng)
    start = time.perf_counter()
    total = 0
    while True:
        for d in range(1, min(p, n)):
            allowed = budget
            if cfg.max_iterations is not None:
                allowed = min(allowed, cfg.max_iterations - total)
                if allowed <= 0:
                    raise BudgetExhaustedError(total)
            try:
                draw, it = draw_until_dependent(x, d + 1, cfg, gen, budget=allowed)
            except BudgetExhaustedError as exc:
                total += exc.iterations
                continue
            total += it
            local = sorted(extract_dependent_subset(x[list(draw)], cfg.rel_tol))
            subspace = orthonormal_basis(x[[draw[i] for i in local]], cfg.rel_tol)
            inliers = np.flatnonzero(residuals(x, subspace) <= cfg.membership_tol)
            return RecoveryResult(subspace, inliers, total, time.perf_counter() - start, draw)
