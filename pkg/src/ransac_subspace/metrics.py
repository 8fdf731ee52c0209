"""Evaluation metrics: recovery angle and Rand index."""
import math

import numpy as np

from .errors import InvalidInputError
from .linalg import principal_angles


def recovery_angle(estimated, truth):
    """Largest principal angle between the estimate and the true subspace.

    Only the largest angle certifies equality, so that is the one reported.
    Subspaces of different dimension can never be equal and get pi/2.
    """
    if estimated.ambient_dim != truth.ambient_dim:
        raise InvalidInputError("subspaces live in different ambient dimensions")
    if estimated.dim != truth.dim:
        return math.pi / 2
    return float(principal_angles(estimated, truth)[-1])


def rand_index(a, b):
    """Fraction of point pairs on which two labelings agree.

    The outlier label 0 is an ordinary class here.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError("label vectors must be one-dimensional and of equal length")
    n = a.size
    if n < 2:
        raise InvalidInputError("need at least two points")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)

    def pairs(x):
        return int((x * (x - 1) // 2).sum())

    total = n * (n - 1) // 2
    same_both = pairs(table)
    same_a = pairs(table.sum(axis=1))
    same_b = pairs(table.sum(axis=0))
    disagree = (same_a - same_both) + (same_b - same_both)
    return (total - disagree) / total
