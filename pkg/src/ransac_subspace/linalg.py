"""Rank tests, orthonormal bases, residuals and principal angles.

Points are stored as rows: a tuple of ``q`` points in dimension ``p`` is a
``(q, p)`` array.  Rank and dependence do not care about orientation.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpanError, InvalidInputError

DEFAULT_REL_TOL = 1e-9
MEMBERSHIP_TOL = 1e-8
_ORTHO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace given by a ``(p, d)`` matrix with orthonormal columns."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float, copy=True)
        if basis.ndim == 1:
            basis = basis[:, None]
        if basis.ndim != 2:
            raise InvalidInputError("basis must be a (p, d) matrix")
        p, d = basis.shape
        if not 1 <= d <= p:
            raise InvalidInputError(f"need 1 <= d <= p, got d={d}, p={p}")
        if not np.all(np.isfinite(basis)):
            raise InvalidInputError("basis has non-finite entries")
        gram = basis.T @ basis
        if np.max(np.abs(gram - np.eye(d))) > _ORTHO_TOL:
            raise InvalidInputError("basis columns are not orthonormal")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def project(self, points):
        points = np.asarray(points, dtype=float)
        return (points @ self.basis) @ self.basis.T

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _as_finite(matrix):
    a = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def numerical_rank(matrix, rel_tol=DEFAULT_REL_TOL):
    """Number of singular values above ``rel_tol`` times the largest one."""
    if rel_tol <= 0:
        raise InvalidInputError("rel_tol must be positive")
    a = _as_finite(matrix)
    if a.ndim == 1:
        a = a[:, None]
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def is_linearly_dependent(points, rel_tol=DEFAULT_REL_TOL):
    """True when the ``q`` rows of ``points`` have rank below ``q``."""
    pts = _as_finite(points)
    if pts.ndim == 1:
        pts = pts[None, :]
    q, p = pts.shape
    if q > p:
        # more than p vectors in R^p are always dependent
        return True
    return numerical_rank(pts, rel_tol) < q


def dependent_mask(stack, rel_tol=DEFAULT_REL_TOL):
    """Vectorized dependence test over a ``(B, q, p)`` stack of tuples.

    Returns a boolean array of length ``B``.  All-zero tuples count as
    dependent.
    """
    stack = np.asarray(stack, dtype=float)
    b, q, p = stack.shape
    if q > p:
        return np.ones(b, dtype=bool)
    s = np.linalg.svd(stack, compute_uv=False)
    return s[:, -1] <= rel_tol * s[:, 0]


def orthonormal_basis(points, rel_tol=DEFAULT_REL_TOL):
    """Orthonormal basis of the span of the rows of ``points``."""
    pts = _as_finite(points)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[0] == 0:
        raise InvalidInputError("need at least one point")
    u, s, _ = np.linalg.svd(pts.T, full_matrices=False)
    if s[0] == 0.0:
        raise DegenerateSpanError("all points are zero")
    r = int(np.count_nonzero(s > rel_tol * s[0]))
    return Subspace(u[:, :r])


def residuals(points, s):
    """Distances from each row of ``points`` to the subspace ``s``."""
    pts = _as_finite(points)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != s.ambient_dim:
        raise InvalidInputError(
            f"point dimension {pts.shape[1]} does not match subspace ambient dimension {s.ambient_dim}")
    r = np.linalg.norm(pts - s.project(pts), axis=1)
    return r[0] if single else r


def residual_distance(point, s):
    """Euclidean distance from ``point`` to its projection onto ``s``."""
    point = np.asarray(point, dtype=float)
    if point.ndim != 1:
        raise InvalidInputError("expected a single point")
    return float(residuals(point, s))


def principal_angles(s1, s2):
    """Principal angles between two subspaces, ascending, in radians.

    Angles come from the cosines (singular values of ``B1.T @ B2``) except
    where the angle is below pi/4: arccos loses about half the digits near 1,
    so those angles are taken from the sines instead, i.e. the singular values
    of the part of the smaller basis orthogonal to the larger subspace.
    """
    if s1.ambient_dim != s2.ambient_dim:
        raise InvalidInputError("subspaces live in different ambient dimensions")
    big, small = (s1, s2) if s1.dim >= s2.dim else (s2, s1)
    cosines = np.linalg.svd(big.basis.T @ small.basis, compute_uv=False)
    cosines = np.clip(cosines, 0.0, 1.0)
    # descending cosines give ascending angles
    angles = np.arccos(cosines)
    rest = small.basis - big.basis @ (big.basis.T @ small.basis)
    sines = np.sort(np.clip(np.linalg.svd(rest, compute_uv=False), 0.0, 1.0))
    near = cosines ** 2 >= 0.5
    angles[near] = np.arcsin(sines[near])
    return angles
