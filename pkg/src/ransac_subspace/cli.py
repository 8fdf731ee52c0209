"""Command line entry point: ``ransac-subspace {gen,recover,cluster,sweep,theory}``.

Exit codes: 0 success, 2 invalid configuration, 3 iteration budget
exhausted, 4 I/O failure.
"""
import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import bench
from .clustering import hm_cluster, ransac_cluster, scc_cluster
from .datagen import make_valid_scene, read_scene, write_scene
from .errors import BudgetExhaustedError, InvalidInputError
from .metrics import rand_index, recovery_angle
from .recovery import RansacConfig, hardt_moitra_recover, ransac_recover
from .sampling import RngStream

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("ransac_subspace")


def _row(text):
    try:
        return bench.as_params([int(v) for v in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    except InvalidInputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _floats(text):
    return [float(v) for v in text.split(",")]


def _ints(text):
    return [int(v) for v in text.split(",")]


def _common(p):
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--trials", type=int, help="number of seeded trials")
    p.add_argument("--out", help="output directory (output prefix for gen)")
    p.add_argument("--workers", type=int, help="worker processes for trials")
    p.add_argument("--config", help="JSON file of flat ExperimentConfig keys")


def _algo(p):
    p.add_argument("--params", type=_row, action="append",
                   help="parameter row d,p,m,m0 or d,p,K,m,m0; repeatable")
    p.add_argument("--algorithms", type=lambda s: s.split(","))
    p.add_argument("--max-iterations", type=int, dest="max_iterations")
    p.add_argument("--replacement", choices=["with", "without"], dest="replacement_mode")
    p.add_argument("--scene", help="prefix of scene files written by 'gen'; runs on that scene")


def build_parser():
    parser = argparse.ArgumentParser(prog="ransac-subspace", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic scene to text files")
    _common(g)
    g.add_argument("--params", type=_row, required=True, help="d,p,m,m0 or d,p,K,m,m0")

    r = sub.add_parser("recover", help="subspace recovery trials (RANSAC, Hardt-Moitra)")
    _common(r)
    _algo(r)
    r.add_argument("-d", "--dim", type=int, help="subspace dimension for --scene runs")

    c = sub.add_parser("cluster", help="subspace clustering trials")
    _common(c)
    _algo(c)
    c.add_argument("-d", "--dim", type=int, help="subspace dimension for --scene runs")
    c.add_argument("-K", "--subspaces", type=int, help="number of subspaces for --scene runs")
    c.add_argument("--tuples", type=int, dest="c", help="d-tuples drawn by SCC")

    s = sub.add_parser("sweep", help="RANSAC iterations over a grid of d and n/m")
    _common(s)
    s.add_argument("--dims", type=_ints, dest="sweep_d")
    s.add_argument("--ratios", type=_floats, dest="sweep_ratios")
    s.add_argument("--m", type=int, dest="sweep_m")
    s.add_argument("--p", type=int, dest="sweep_p")
    s.add_argument("--cap", type=float)

    t = sub.add_parser("theory", help="closed-form iteration quantities as CSV")
    _common(t)
    t.add_argument("--params", type=_row, action="append")
    return parser


_CONFIG_KEYS = ("seed", "trials", "out", "workers", "params", "algorithms", "max_iterations",
                "replacement_mode", "c", "sweep_d", "sweep_ratios", "sweep_m", "sweep_p", "cap")


def _experiment_config(kind, args):
    overrides = {k: getattr(args, k, None) for k in _CONFIG_KEYS}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.config:
        return bench.load_config(args.config, kind=kind, **overrides)
    return bench.ExperimentConfig(kind=kind, **overrides)


def _print_rows(rows, header, stream=sys.stdout):
    w = csv.DictWriter(stream, fieldnames=header, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: bench._fmt(row.get(k)) for k in header})


def cmd_gen(args):
    if not args.out:
        raise InvalidInputError("gen needs --out PREFIX")
    scene = make_valid_scene(args.params, RngStream(args.seed or 0, 0))
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    for path in write_scene(scene, args.out):
        print(path)
    return EXIT_OK


def _scene_run(kind, args):
    scene = read_scene(args.scene)
    d = args.dim or (scene.dims[0] if scene.subspaces else None)
    if scene.labels is None and args.max_iterations is None:
        raise InvalidInputError("scene has no labels, so the inlier count is unknown: pass --max-iterations")
    cfg = RansacConfig(max_iterations=args.max_iterations,
                       replacement_mode=args.replacement_mode or "with")
    seed = args.seed or 0
    algorithms = args.algorithms or (["ransac"] if kind == "recover" else ["ransac_cluster"])
    K = getattr(args, "subspaces", None) or scene.K or 1
    n, p = scene.points.shape
    counts = {}
    if scene.labels is not None:
        counts = {"K": K, "m": int((scene.labels == 1).sum()), "m0": int((scene.labels == 0).sum())}
    records, exhausted = [], False
    for trial in range(args.trials or 1):
        for algorithm in algorithms:
            rec = {"experiment": kind, "algorithm": algorithm, "d": d or "", "p": p, "n": n,
                   "trial": trial, "seed": seed, "replacement_mode": cfg.replacement_mode,
                   "exact": 0, **counts}
            rng = RngStream(seed, trial)
            try:
                if algorithm == "ransac":
                    _need(d, "-d")
                    res = ransac_recover(scene.points, d, cfg, rng)
                elif algorithm == "hm":
                    res = hardt_moitra_recover(scene.points, cfg, rng)
                elif algorithm == "ransac_cluster":
                    _need(d, "-d")
                    res = ransac_cluster(scene.points, d, K, cfg, rng)
                elif algorithm == "hm_cluster":
                    res = hm_cluster(scene.points, K, cfg, rng)
                elif algorithm == "scc":
                    _need(d, "-d")
                    res = scc_cluster(scene.points, d, K, args.c or 500, cfg, rng)
                else:
                    raise InvalidInputError(f"unknown algorithm {algorithm!r}")
            except BudgetExhaustedError as exc:
                rec["iterations"] = exc.iterations
                exhausted = True
                records.append(rec)
                continue
            rec.update(iterations=res.iterations, elapsed_s=res.elapsed)
            if kind == "recover" and scene.subspaces:
                angle = recovery_angle(res.subspace, scene.subspaces[0])
                exact = angle <= bench.EXACT_ANGLE
                if scene.labels is not None:
                    exact = exact and np.array_equal(np.sort(res.inlier_indices), scene.inliers(1))
                rec.update(angle=angle, exact=int(exact))
            elif kind == "cluster" and scene.labels is not None:
                ri = rand_index(scene.labels, res.labels)
                rec.update(rand_index=ri, exact=int(ri == 1.0))
            records.append(rec)
    if args.out:
        bench.write_csv(args.out, records, bench.TRIAL_FIELDS)
    _print_rows(records, bench.TRIAL_FIELDS)
    return EXIT_BUDGET if exhausted else EXIT_OK


def _need(value, flag):
    if value is None:
        raise InvalidInputError(f"dimension unknown: pass {flag}")


def cmd_experiment(kind, args):
    if getattr(args, "scene", None):
        return _scene_run(kind, args)
    cfg = _experiment_config(kind, args)
    result = bench.RUNNERS[kind](cfg)
    header = {"sweep": bench.SWEEP_FIELDS, "theory": bench.THEORY_FIELDS}.get(kind, bench.SUMMARY_FIELDS)
    _print_rows(result.summary, header)
    for path in result.paths:
        log.info("wrote %s", path)
    return EXIT_BUDGET if result.budget_exhausted() else EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "gen":
            return cmd_gen(args)
        return cmd_experiment(args.command, args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
