"""Experiment harness for the recovery, clustering and complexity experiments.

Every trial is a pure function of ``(seed, trial index)``: its random
stream is ``RngStream(seed, trial)``, and the scene of parameter row ``r``
and each algorithm run on it use fixed jumps of that stream.  Trials may
therefore run in any order or in parallel and produce identical records.
"""
import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from . import theory
from .clustering import hm_cluster, ransac_cluster, scc_cluster
from .datagen import make_valid_scene
from .errors import BudgetExhaustedError, InvalidInputError, SubspaceError
from .metrics import rand_index, recovery_angle
from .recovery import WITH, WITHOUT, RansacConfig, hardt_moitra_recover, ransac_recover
from .sampling import RNG_ALGORITHM, RngStream
from .theory import TheoryParams

EXACT_ANGLE = 1e-8

TABLE1_ROWS = [(8, 10, 100, 50), (4, 10, 100, 50), (8, 20, 100, 50),
               (6, 10, 100, 20), (9, 10, 100, 50), (18, 20, 100, 50)]
TABLE2_ROWS = [(4, 8, 3, 50, 50), (6, 8, 3, 50, 50), (4, 8, 3, 50, 100),
               (4, 8, 5, 50, 50), (8, 10, 3, 50, 50)]

RECOVERY_ALGORITHMS = ("ransac", "hm")
CLUSTERING_ALGORITHMS = ("ransac_cluster", "hm_cluster", "scc")
# fixed order so an algorithm's stream does not depend on which others run
_ALGORITHM_SLOTS = RECOVERY_ALGORITHMS + CLUSTERING_ALGORITHMS

TRIAL_FIELDS = ["experiment", "algorithm", "d", "p", "K", "m", "m0", "n", "trial", "seed",
                "iterations", "angle", "rand_index", "exact", "elapsed_s", "replacement_mode"]
IDENTITY_FIELDS = ["experiment", "algorithm", "d", "p", "K", "m", "m0", "n"]
SUMMARY_FIELDS = IDENTITY_FIELDS + ["mean_iterations", "se_iterations", "theory_iterations",
                                    "mean_angle", "exact_fraction", "mean_rand_index"]
SWEEP_FIELDS = ["d", "ratio", "m", "n", "p", "empirical_mean", "theory_mean", "se", "trials",
                "z", "within_3se", "skip_reason"]
THEORY_FIELDS = ["d", "p", "K", "m", "m0", "n", "theta1", "theta2", "expected_recovery",
                 "expected_hm", "negative_hypergeometric_mean", "expected_clustering",
                 "clustering_bound"]

KINDS = ("recover", "cluster", "sweep", "theory")


class InvalidConfigError(InvalidInputError):
    pass


@dataclass
class ExperimentConfig:
    kind: str = "recover"
    params: list = None
    trials: int = None
    seed: int = 0
    algorithms: list = None
    out: str = None
    workers: int = 1
    replacement_mode: str = WITH
    max_iterations: int = None
    c: int = 500
    audit: int = 200
    sweep_d: list = field(default_factory=lambda: [1, 2, 3, 4])
    sweep_ratios: list = field(default_factory=lambda: [1.25, 1.5, 2.0])
    sweep_m: int = 40
    sweep_p: int = 10
    cap: float = 1e6

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.params is None:
            self.params = TABLE2_ROWS if self.kind == "cluster" else TABLE1_ROWS
        self.params = [as_params(row) for row in self.params]
        if not self.params:
            raise InvalidConfigError("params must not be empty")
        if self.trials is None:
            self.trials = 500 if self.kind == "cluster" else 1000
        if self.algorithms is None:
            self.algorithms = ["ransac_cluster"] if self.kind == "cluster" else list(RECOVERY_ALGORITHMS)
        allowed = CLUSTERING_ALGORITHMS if self.kind == "cluster" else RECOVERY_ALGORITHMS
        bad = [a for a in self.algorithms if a not in allowed]
        if bad or not self.algorithms:
            raise InvalidConfigError(f"algorithms for {self.kind} must be drawn from {allowed}, got {self.algorithms}")
        if int(self.trials) < 1 or int(self.workers) < 1:
            raise InvalidConfigError("trials and workers must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise InvalidConfigError("seed must be an unsigned 64-bit integer")
        if self.replacement_mode not in (WITH, WITHOUT):
            raise InvalidConfigError("replacement_mode must be 'with' or 'without'")
        if not self.sweep_d or not self.sweep_ratios:
            raise InvalidConfigError("sweep grids must not be empty")

    def ransac_config(self):
        return RansacConfig(max_iterations=self.max_iterations, replacement_mode=self.replacement_mode)


def as_params(row):
    """(d, p, m, m0) or (d, p, K, m, m0), the orders used by the two tables."""
    if isinstance(row, TheoryParams):
        return row
    row = [int(v) for v in row]
    try:
        if len(row) == 4:
            d, p, m, m0 = row
            return TheoryParams(d=d, p=p, m=m, m0=m0)
        if len(row) == 5:
            d, p, K, m, m0 = row
            return TheoryParams(d=d, p=p, m=m, m0=m0, K=K)
    except InvalidInputError as exc:
        raise InvalidConfigError(str(exc)) from exc
    raise InvalidConfigError(f"parameter rows have 4 or 5 entries, got {row}")


def load_config(path, **overrides):
    """Read a JSON object with flat keys named after ExperimentConfig fields."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InvalidConfigError(f"{path}: expected a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise InvalidConfigError(f"{path}: unknown keys {unknown}")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**raw)


def _stream(seed, trial, jump):
    bitgen = RngStream(seed, trial).generator().bit_generator
    return np.random.Generator(bitgen.jumped(jump) if jump else bitgen)


def _scene_and_streams(cfg, row_index, params, trial):
    slot = row_index * (len(_ALGORITHM_SLOTS) + 1)
    # the harness audit stays within its sample budget even for small n
    scene = make_valid_scene(params, _stream(cfg.seed, trial, slot), audit=cfg.audit,
                             exhaustive_max=cfg.audit)
    streams = {a: _stream(cfg.seed, trial, slot + 1 + _ALGORITHM_SLOTS.index(a)) for a in cfg.algorithms}
    return scene, streams


def _base_record(cfg, experiment, algorithm, params, trial):
    return {"experiment": experiment, "algorithm": algorithm, "d": params.d, "p": params.p,
            "K": params.K, "m": params.m, "m0": params.m0, "n": params.n, "trial": trial,
            "seed": cfg.seed, "iterations": "", "angle": "", "rand_index": "", "exact": 0,
            "elapsed_s": "", "replacement_mode": cfg.replacement_mode, "status": "ok"}


def recovery_trial(cfg, row_index, params, trial):
    scene, streams = _scene_and_streams(cfg, row_index, params, trial)
    truth = scene.subspaces[0]
    true_inliers = scene.inliers(1)
    rcfg = cfg.ransac_config()
    out = []
    for algorithm in cfg.algorithms:
        rec = _base_record(cfg, "recover", algorithm, params, trial)
        try:
            if algorithm == "ransac":
                res = ransac_recover(scene.points, params.d, rcfg, streams[algorithm])
            else:
                res = hardt_moitra_recover(scene.points, rcfg, streams[algorithm])
        except BudgetExhaustedError as exc:
            rec.update(iterations=exc.iterations, status="budget_exhausted")
            out.append(rec)
            continue
        angle = recovery_angle(res.subspace, truth)
        exact = angle <= EXACT_ANGLE and np.array_equal(np.sort(res.inlier_indices), true_inliers)
        rec.update(iterations=res.iterations, angle=angle, exact=int(exact), elapsed_s=res.elapsed)
        out.append(rec)
    return out


def clustering_trial(cfg, row_index, params, trial):
    scene, streams = _scene_and_streams(cfg, row_index, params, trial)
    rcfg = cfg.ransac_config()
    out = []
    for algorithm in cfg.algorithms:
        rec = _base_record(cfg, "cluster", algorithm, params, trial)
        try:
            if algorithm == "ransac_cluster":
                res = ransac_cluster(scene.points, params.d, params.K, rcfg, streams[algorithm])
            elif algorithm == "hm_cluster":
                res = hm_cluster(scene.points, params.K, rcfg, streams[algorithm])
            else:
                res = scc_cluster(scene.points, params.d, params.K, cfg.c, rcfg, streams[algorithm])
        except BudgetExhaustedError as exc:
            rec.update(iterations=exc.iterations, status="budget_exhausted")
            out.append(rec)
            continue
        except SubspaceError as exc:
            rec["status"] = type(exc).__name__
            out.append(rec)
            continue
        ri = rand_index(scene.labels, res.labels)
        rec.update(iterations=res.iterations, rand_index=ri, exact=int(ri == 1.0), elapsed_s=res.elapsed)
        out.append(rec)
    return out


def _run_one(job):
    fn, cfg, row_index, params, trial = job
    return fn(cfg, row_index, params, trial)


def _run_trials(cfg, fn, jobs):
    """Run ``(row_index, params, trial)`` jobs; records come back in job order."""
    payload = [(fn, cfg, r, p, t) for r, p, t in jobs]
    if cfg.workers == 1:
        results = [_run_one(job) for job in payload]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_one, payload, chunksize=max(1, len(payload) // (8 * cfg.workers))))
    return [rec for batch in results for rec in batch]


def theory_iterations(algorithm, params, replacement_mode=WITH):
    n, m, d, p = params.n, params.m, params.d, params.p
    if algorithm == "ransac":
        if replacement_mode == WITHOUT:
            return theory.negative_hypergeometric_mean(n, m, d)
        return theory.expected_iterations_recovery(n, m, d)
    if algorithm == "hm" and n > p:
        return theory.expected_iterations_hm(n, m, d, p)
    if algorithm == "ransac_cluster" and replacement_mode == WITH:
        return theory.expected_iterations_clustering(params).expected
    return None


def _mean(values):
    return math.fsum(values) / len(values) if values else None


def summarize(records, replacement_mode=WITH):
    """Aggregate per-trial records by parameter row and algorithm."""
    groups = {}
    for rec in records:
        key = tuple(rec[k] for k in IDENTITY_FIELDS)
        groups.setdefault(key, []).append(rec)
    rows = []
    for key, recs in groups.items():
        its = [float(r["iterations"]) for r in recs if r["iterations"] != ""]
        angles = [float(r["angle"]) for r in recs if r["angle"] != ""]
        ris = [float(r["rand_index"]) for r in recs if r["rand_index"] != ""]
        row = dict(zip(IDENTITY_FIELDS, key))
        params = TheoryParams(d=int(row["d"]), p=int(row["p"]), m=int(row["m"]),
                              m0=int(row["m0"]), K=int(row["K"]))
        mean_it = _mean(its)
        se = float(np.std(its, ddof=1) / math.sqrt(len(its))) if len(its) > 1 else 0.0
        row.update(mean_iterations=mean_it, se_iterations=se,
                   theory_iterations=theory_iterations(row["algorithm"], params, replacement_mode),
                   mean_angle=_mean(angles),
                   exact_fraction=_mean([float(r["exact"]) for r in recs]),
                   mean_rand_index=_mean(ris))
        rows.append(row)
    return rows


@dataclass
class ExperimentOutput:
    records: list
    summary: list
    paths: list = field(default_factory=list)

    def budget_exhausted(self):
        return any(r.get("status") == "budget_exhausted" for r in self.records)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def write_csv(path, rows, header):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header)
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(row.get(k)) for k in header})


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _metadata(cfg):
    meta = asdict(cfg)
    meta["params"] = [list(p.as_tuple()) for p in cfg.params]
    meta.update(rng_algorithm=RNG_ALGORITHM, stream_rule="stream_id = trial index; fixed jumps per row and algorithm",
                outlier_convention="outliers form their own class (label 0) in the Rand index",
                scene_policy="subspaces and points resampled for every trial",
                exact_angle=EXACT_ANGLE)
    return meta


def _write_outputs(cfg, named_tables):
    if not cfg.out:
        return []
    try:
        os.makedirs(cfg.out, exist_ok=True)
        paths = []
        for name, rows, header in named_tables:
            path = os.path.join(cfg.out, name)
            write_csv(path, rows, header)
            paths.append(path)
        meta_path = os.path.join(cfg.out, "metadata.json")
        with open(meta_path, "w") as fh:
            json.dump(_metadata(cfg), fh, indent=2, sort_keys=True)
        paths.append(meta_path)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write results under {cfg.out!r}: {exc.strerror}", exc.filename) from exc
    return paths


def _jobs(cfg):
    return [(r, params, t) for r, params in enumerate(cfg.params) for t in range(cfg.trials)]


def run_recovery_experiment(cfg):
    """Recovery trials for every parameter row; per-trial records and a summary."""
    if cfg.kind != "recover":
        cfg = replace(cfg, kind="recover")
    records = _run_trials(cfg, recovery_trial, _jobs(cfg))
    summary = summarize(records, cfg.replacement_mode)
    paths = _write_outputs(cfg, [("trials.csv", records, TRIAL_FIELDS),
                                 ("summary.csv", summary, SUMMARY_FIELDS)])
    return ExperimentOutput(records, summary, paths)


def run_clustering_experiment(cfg):
    """Clustering trials for every parameter row; Rand index against ground truth."""
    if cfg.kind != "cluster":
        cfg = replace(cfg, kind="cluster")
    records = _run_trials(cfg, clustering_trial, _jobs(cfg))
    summary = summarize(records, cfg.replacement_mode)
    paths = _write_outputs(cfg, [("trials.csv", records, TRIAL_FIELDS),
                                 ("summary.csv", summary, SUMMARY_FIELDS)])
    return ExperimentOutput(records, summary, paths)


def sweep_cells(cfg):
    cells = []
    for d in cfg.sweep_d:
        for ratio in cfg.sweep_ratios:
            m = int(cfg.sweep_m)
            n = int(round(ratio * m))
            p = max(int(cfg.sweep_p), int(d) + 1)
            cells.append((int(d), float(ratio), m, n, p))
    return cells


def run_complexity_sweep(cfg):
    """RANSAC iteration counts over a grid of dimension and n/m.

    Each cell reports the empirical mean next to 1/theta1.  Cells that are
    infeasible or whose expected count exceeds ``cfg.cap`` are kept with a
    skip reason instead of data.
    """
    cfg = replace(cfg, kind="sweep", algorithms=["ransac"])
    rows, jobs = [], []
    for d, ratio, m, n, p in sweep_cells(cfg):
        row = {"d": d, "ratio": ratio, "m": m, "n": n, "p": p, "trials": cfg.trials}
        if n < m or m < d + 1:
            row["skip_reason"] = f"infeasible cell: n={n}, m={m}, d={d}"
        else:
            expected = theory.expected_iterations_recovery(n, m, d)
            row["theory_mean"] = expected
            if expected > cfg.cap:
                row["skip_reason"] = f"expected iterations {expected:.4g} exceed cap {cfg.cap:.4g}"
            else:
                params = TheoryParams(d=d, p=p, m=m, m0=n - m)
                jobs.extend((len(rows), params, t) for t in range(cfg.trials))
        rows.append(row)
    records = _run_trials(cfg, recovery_trial, jobs)
    for rec in records:
        rec["experiment"] = "sweep"
    by_cell = {}
    for (cell, _, _), rec in zip(jobs, records):
        by_cell.setdefault(cell, []).append(rec)
    for cell, recs in by_cell.items():
        row = rows[cell]
        its = np.array([float(r["iterations"]) for r in recs])
        mean = float(its.mean())
        se = float(its.std(ddof=1) / math.sqrt(its.size)) if its.size > 1 else 0.0
        diff = mean - row["theory_mean"]
        z = diff / se if se > 0 else (0.0 if diff == 0 else math.inf)
        row.update(empirical_mean=mean, se=se, z=z, within_3se=int(abs(z) <= 3), skip_reason="")
    paths = _write_outputs(cfg, [("trials.csv", records, TRIAL_FIELDS),
                                 ("sweep.csv", rows, SWEEP_FIELDS)])
    return ExperimentOutput(records, rows, paths)


def theory_row(params):
    n, m, d, p = params.n, params.m, params.d, params.p
    row = {"d": d, "p": p, "K": params.K, "m": m, "m0": params.m0, "n": n,
           "theta1": theory.theta1(n, m, d),
           "expected_recovery": theory.expected_iterations_recovery(n, m, d),
           "negative_hypergeometric_mean": theory.negative_hypergeometric_mean(n, m, d)}
    if n > p:
        row["theta2"] = theory.theta2(n, m, d, p)
        row["expected_hm"] = theory.expected_iterations_hm(n, m, d, p)
    clus = theory.expected_iterations_clustering(params)
    row.update(expected_clustering=clus.expected, clustering_bound=clus.bound)
    return row


def run_theory(cfg):
    """Closed-form quantities for each parameter row."""
    rows = [theory_row(p) for p in cfg.params]
    paths = _write_outputs(replace(cfg, kind="theory"), [("theory.csv", rows, THEORY_FIELDS)])
    return ExperimentOutput([], rows, paths)


RUNNERS = {"recover": run_recovery_experiment, "cluster": run_clustering_experiment,
           "sweep": run_complexity_sweep, "theory": run_theory}
