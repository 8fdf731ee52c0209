"""Synthetic noiseless scenes: inliers on random subspaces, outliers on the sphere.

Scene files are plain text.  A matrix file starts with a line ``rows cols``
followed by one row per line, values written with 17 significant digits.
A scene saved under ``prefix`` consists of ``prefix.points.txt``,
``prefix.labels.txt`` (one label per line, 0 for outliers) and one
``prefix.basis<k>.txt`` per subspace holding the basis vectors as rows.
"""
import itertools
import os
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DegenerateSceneError, InvalidInputError
from .linalg import DEFAULT_REL_TOL, Subspace, dependent_mask
from .sampling import as_generator, sample_tuples
from .theory import TheoryParams

OUTLIER = 0
EXHAUSTIVE_AUDIT_MAX_N = 25
EXHAUSTIVE_AUDIT_MAX_TUPLES = 200_000
DEFAULT_AUDIT_SAMPLES = 10_000


@dataclass(eq=False)
class Scene:
    points: np.ndarray
    labels: np.ndarray
    subspaces: list
    params: TheoryParams = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def p(self):
        return self.points.shape[1]

    @property
    def K(self):
        return len(self.subspaces)

    @property
    def dims(self):
        return [s.dim for s in self.subspaces]

    def inliers(self, k):
        """Indices of the points on subspace ``k`` (1-based)."""
        return np.flatnonzero(self.labels == k)


def random_subspace(p, d, rng):
    """Rotation-invariant random d-dimensional subspace of R^p."""
    if not 1 <= d < p:
        raise InvalidInputError(f"need 1 <= d < p, got d={d}, p={p}")
    gen = as_generator(rng)
    q, _ = np.linalg.qr(gen.standard_normal((p, d)))
    return Subspace(q)


def _unit_rows(x):
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def sample_on_subspace_sphere(s, count, rng):
    """``count`` points uniform on the unit sphere of the subspace ``s``."""
    if count < 1:
        raise InvalidInputError("count must be positive")
    gen = as_generator(rng)
    coef = _unit_rows(gen.standard_normal((count, s.dim)))
    return coef @ s.basis.T


def sample_on_sphere(p, count, rng):
    """``count`` points uniform on the unit sphere of R^p."""
    if count < 1:
        raise InvalidInputError("count must be positive")
    gen = as_generator(rng)
    return _unit_rows(gen.standard_normal((count, p)))


def make_scene(params, rng, audit=DEFAULT_AUDIT_SAMPLES, exhaustive_max=EXHAUSTIVE_AUDIT_MAX_TUPLES):
    """Draw a scene for ``params``: K subspaces of dimension d, m points each,
    m0 outliers, shuffled."""
    return make_scene_from_dims(params.p, [params.d] * params.K, params.m, params.m0, rng,
                                audit=audit, params=params, exhaustive_max=exhaustive_max)


def make_valid_scene(params, rng, audit=DEFAULT_AUDIT_SAMPLES, exhaustive_max=EXHAUSTIVE_AUDIT_MAX_TUPLES):
    """:func:`make_scene`, drawing again from the same stream whenever the audit fires."""
    gen = as_generator(rng)
    while True:
        try:
            return make_scene(params, gen, audit=audit, exhaustive_max=exhaustive_max)
        except DegenerateSceneError:
            continue


def make_scene_from_dims(p, dims, m, m0, rng, audit=DEFAULT_AUDIT_SAMPLES, params=None,
                         exhaustive_max=EXHAUSTIVE_AUDIT_MAX_TUPLES):
    """Like :func:`make_scene` but each subspace gets its own dimension.

    ``m`` may be an int or one count per subspace.
    """
    gen = as_generator(rng)
    counts = [m] * len(dims) if np.isscalar(m) else list(m)
    if len(counts) != len(dims):
        raise InvalidInputError("need one inlier count per subspace")
    for d, c in zip(dims, counts):
        if not 1 <= d < p or c < 1:
            raise InvalidInputError(f"invalid subspace dimension {d} or count {c} for p={p}")
    subspaces = [random_subspace(p, d, gen) for d in dims]
    blocks, labels = [], []
    for k, (s, c) in enumerate(zip(subspaces, counts), start=1):
        blocks.append(sample_on_subspace_sphere(s, c, gen))
        labels.append(np.full(c, k))
    if m0 > 0:
        blocks.append(sample_on_sphere(p, m0, gen))
        labels.append(np.full(m0, OUTLIER))
    points = np.vstack(blocks)
    labels = np.concatenate(labels)
    order = gen.permutation(points.shape[0])
    scene = Scene(points[order], labels[order], subspaces, params,
                  meta={"subspace_law": "gaussian-qr", "resampled_per_trial": True})
    if audit:
        audit_scene(scene, gen, samples=audit, exhaustive_max=exhaustive_max)
    return scene


def _expected_dependent(labels_stack, dims):
    counts = np.stack([(labels_stack == k).sum(axis=1) for k in range(1, len(dims) + 1)], axis=1)
    return (counts >= np.asarray(dims) + 1).any(axis=1)


def _exhaustive(n, q, limit=EXHAUSTIVE_AUDIT_MAX_TUPLES):
    return n <= EXHAUSTIVE_AUDIT_MAX_N and comb(n, q) <= limit


def audit_scene(scene, rng, samples=DEFAULT_AUDIT_SAMPLES, rel_tol=DEFAULT_REL_TOL, chunk=4096,
                exhaustive_max=EXHAUSTIVE_AUDIT_MAX_TUPLES):
    """Check the general-position assumption on tuples of the scene.

    A tuple of at most p points must be dependent exactly when it holds at
    least d_k+1 points of some subspace k.  Tuple sizes d_k+1 and p are
    checked; exhaustively for n <= 25 when a size has at most
    ``exhaustive_max`` tuples, otherwise on ``samples`` random tuples.
    Raises :class:`DegenerateSceneError` on the first mismatch.
    """
    n, p = scene.points.shape
    sizes = sorted({d + 1 for d in scene.dims} | {p})
    sizes = [q for q in sizes if q <= min(n, p)]
    gen = as_generator(rng)
    for q in sizes:
        if _exhaustive(n, q, exhaustive_max):
            combos = np.array(list(itertools.combinations(range(n), q)), dtype=np.intp)
        else:
            combos = sample_tuples(n, q, max(1, samples // len(sizes)), gen)
        for start in range(0, len(combos), chunk):
            idx = combos[start:start + chunk]
            got = dependent_mask(scene.points[idx], rel_tol)
            want = _expected_dependent(scene.labels[idx], scene.dims)
            bad = np.flatnonzero(got != want)
            if bad.size:
                raise DegenerateSceneError(
                    f"tuple {idx[bad[0]].tolist()} violates general position")


def audit_tuple_count(n, p, dims, samples=DEFAULT_AUDIT_SAMPLES, exhaustive_max=EXHAUSTIVE_AUDIT_MAX_TUPLES):
    sizes = [q for q in sorted({d + 1 for d in dims} | {p}) if q <= min(n, p)]
    return sum(comb(n, q) if _exhaustive(n, q, exhaustive_max) else max(1, samples // len(sizes)) for q in sizes)


def write_matrix(path, a):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    with open(path, "w") as fh:
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            fh.write(" ".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def read_matrix(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise InvalidInputError(f"{path}: first line must be 'rows cols'")
        rows, cols = int(header[0]), int(header[1])
        data = np.loadtxt(fh, dtype=float, ndmin=2) if rows else np.empty((0, cols))
    if data.shape != (rows, cols):
        raise InvalidInputError(f"{path}: header says {rows}x{cols}, found {data.shape[0]}x{data.shape[1]}")
    return data


def scene_paths(prefix, K):
    return (f"{prefix}.points.txt", f"{prefix}.labels.txt",
            [f"{prefix}.basis{k}.txt" for k in range(1, K + 1)])


def write_scene(scene, prefix):
    points_path, labels_path, basis_paths = scene_paths(prefix, scene.K)
    write_matrix(points_path, scene.points)
    with open(labels_path, "w") as fh:
        fh.writelines(f"{int(k)}\n" for k in scene.labels)
    for path, s in zip(basis_paths, scene.subspaces):
        write_matrix(path, s.basis.T)
    return [points_path, labels_path, *basis_paths]


def read_scene(prefix):
    """Load a scene written by :func:`write_scene`.

    The labels and basis files are optional; without labels the scene has
    ``labels`` set to ``None``.
    """
    points = read_matrix(f"{prefix}.points.txt")
    labels_path = f"{prefix}.labels.txt"
    labels = None
    if os.path.exists(labels_path):
        labels = np.loadtxt(labels_path, dtype=int, ndmin=1)
        if labels.shape != (points.shape[0],):
            raise InvalidInputError(f"{labels_path}: expected {points.shape[0]} labels")
    subspaces = []
    k = 1
    while os.path.exists(f"{prefix}.basis{k}.txt"):
        subspaces.append(Subspace(read_matrix(f"{prefix}.basis{k}.txt").T))
        k += 1
    params = None
    if labels is not None and subspaces:
        dims = {s.dim for s in subspaces}
        sizes = {int((labels == k).sum()) for k in range(1, len(subspaces) + 1)}
        if len(dims) == 1 and len(sizes) == 1:
            try:
                params = TheoryParams(d=dims.pop(), p=points.shape[1], m=sizes.pop(),
                                      m0=int((labels == OUTLIER).sum()), K=len(subspaces))
            except InvalidInputError:
                params = None
    return Scene(points, labels, subspaces, params)
