"""Independent reference computations used by the tests.

Nothing here imports the package: ranks are exact (fraction-free Bareiss
elimination over the integers or Fraction elimination over the rationals),
counts come from enumeration, binomials from math.comb.
"""
import itertools
from fractions import Fraction
from math import comb


def exact_rank(rows):
    """Rank of a matrix with integer or Fraction entries, exactly."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, nrows):
            if m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def int_rank(rows):
    """Exact rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(map(int, row)) for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        piv = m[rank][col]
        for r in range(rank + 1, nrows):
            mult = m[r][col]
            m[r] = [(piv * a - mult * b) // prev for a, b in zip(m[r], m[rank])]
        prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank


def is_dependent(rows):
    return int_rank(rows) < len(rows)


def circuits(rows):
    """All minimal dependent subsets of the rows, by exhaustive enumeration."""
    q = len(rows)
    dependent = {}
    found = []
    for size in range(1, q + 1):
        for sub in itertools.combinations(range(q), size):
            dep = is_dependent([rows[i] for i in sub])
            dependent[sub] = dep
            if dep and all(not dependent[s] for s in itertools.combinations(sub, size - 1) if s):
                found.append(frozenset(sub))
    return found


def circuit_union(rows):
    out = set()
    for c in circuits(rows):
        out |= c
    return frozenset(out)


def non_coloops(rows):
    """Positions whose removal keeps the rank; equals the union of circuits."""
    r = int_rank(rows)
    return frozenset(i for i in range(len(rows))
                     if int_rank([row for j, row in enumerate(rows) if j != i]) == r)


def first_min_dependent(rows):
    """Lexicographically first dependent subset of minimum size >= 2."""
    for size in range(2, len(rows) + 1):
        for sub in itertools.combinations(range(len(rows)), size):
            if is_dependent([rows[i] for i in sub]):
                return frozenset(sub)
    return None


def theta1_exact(n, m, d):
    return Fraction(comb(m, d + 1), comb(n, d + 1))


def theta2_exact(n, m, d, p):
    return Fraction(sum(comb(m, k) * comb(n - m, p - k) for k in range(d + 1, p + 1)), comb(n, p))


def theta2_enumerate(n, m, d, p):
    """Fraction of all p-subsets of n items (items < m are inliers) with >= d+1 inliers."""
    hits = total = 0
    for sub in itertools.combinations(range(n), p):
        total += 1
        hits += sum(1 for i in sub if i < m) >= d + 1
    return Fraction(hits, total)


def rand_index_pairs(a, b):
    n = len(a)
    agree = sum((a[i] == a[j]) == (b[i] == b[j]) for i in range(n) for j in range(i + 1, n))
    return agree / (n * (n - 1) / 2)


def geometric_inverse_cdf(u, theta):
    """Geometric on {1, 2, ...} by inversion: smallest k with 1-(1-theta)^k >= u."""
    import math
    if theta == 1:
        return 1
    return max(1, math.ceil(math.log1p(-u) / math.log1p(-theta)))


def gaussian_rank(cols, tol=1e-12):
    """Rank of a small float matrix by partial-pivot Gaussian elimination."""
    m = [list(map(float, r)) for r in cols]
    rank = 0
    nrows, ncols = len(m), len(m[0])
    for col in range(ncols):
        pivot = max(range(rank, nrows), key=lambda r: abs(m[r][col]), default=None)
        if pivot is None or abs(m[pivot][col]) <= tol:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, nrows):
            f = m[r][col] / m[rank][col]
            m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank
