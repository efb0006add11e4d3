"""Command-line interface.

Exit codes: 0 success, 2 validation failure, 3 infeasible configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import _backend
from .centroid import TooLargeError
from .core import EmptyDatasetError, InvalidRankingError, format_rankings_csv, read_rankings_csv
from .generators import GenerationError, SwapClusterSpec, gen_swap_clustered, tightness_rows, uniform_rows
from .ingest import RatingsError, format_ratings_csv, lambda_filter, prediction_accuracy, rankings_csv, read_ratings_csv
from .kmc import InfeasibleKError
from .krca import KrcaConfig, krca
from .rng import ALGORITHM

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_generated(rows, meta: dict, out: str | None) -> None:
    _emit(format_rankings_csv(rows), out)
    if out:
        meta = {"prng": ALGORITHM, **meta}
        Path(out + ".json").write_text(json.dumps(meta, indent=2) + "\n")


def cmd_generate(args) -> int:
    if args.kind == "uniform":
        rows = uniform_rows(args.n, args.m, args.seed)
        meta = {"kind": "uniform", "n": args.n, "m": args.m, "seed": args.seed}
    elif args.kind == "swap":
        spec = SwapClusterSpec(args.n, args.m, args.k, args.omega, args.seed)
        ds, centroids, labels = gen_swap_clustered(spec)
        rows = ds.rankings[ds.inverse]
        meta = {
            "kind": "swap",
            "spec": spec.to_dict(),
            "true_centroids": centroids.tolist(),
            "true_labels": labels.tolist(),
        }
    else:
        rows = tightness_rows(args.k)
        meta = {
            "kind": "tightness",
            "k": args.k,
            "m": int(rows.shape[1]),
            "expected_v_krc": 2 * args.k,
            "expected_v_kmc": args.k,
        }
    _write_generated(rows, meta, args.out)
    return EXIT_OK


def cmd_krca(args) -> int:
    ds = read_rankings_csv(args.input)
    cfg = KrcaConfig(
        k=args.k,
        epsilon=args.epsilon,
        bnb_threshold=args.bnb_threshold,
        tol=args.tol,
        max_outer_iter=args.max_iter,
        seed=args.seed,
    )
    report = krca(ds, cfg)
    doc = report.to_dict()
    if not args.labels:
        doc["baseline"].pop("labels")
        doc["final"].pop("labels")
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_ingest(args) -> int:
    records = read_ratings_csv(args.ratings)
    pairs = lambda_filter(records, args.genres, args.lam)
    _emit(rankings_csv(pairs), args.out)
    if args.users_out:
        Path(args.users_out).write_text("".join(u + "\n" for u, _ in pairs))
    return EXIT_OK


def cmd_experiment(args) -> int:
    records = read_ratings_csv(args.ratings)
    rep = prediction_accuracy(records, args.genres, args.lam, args.k, args.seed)
    _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .theory import exact_kmc_oracle, exact_krc_oracle, mu_depth_bound

    w = csv.writer(sys.stdout, lineterminator="\n")
    if args.what == "mu":
        deltas = [int(d) for d in args.deltas.split(",")]
        w.writerow(["m"] + [f"delta={d}" for d in deltas])
        for m in range(args.m_min, args.m_max + 1):
            w.writerow([m] + [mu_depth_bound(m, d, max_m=args.m_max) for d in deltas])
        return EXIT_OK
    ds = read_rankings_csv(args.input)
    w.writerow(["k", "v_krc", "v_kmc", "ratio"])
    for k in range(1, args.k + 1):
        v_krc = exact_krc_oracle(ds, k)[1]
        v_kmc = exact_kmc_oracle(ds, k)
        ratio = v_krc / v_kmc if v_kmc > 0 else ""
        w.writerow([k, v_krc, repr(v_kmc), ratio])
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import backend_speedups, crossover

    ms = [int(v) for v in args.ms.split(",")]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["backend", "m", "n", "k", "distinct", "bnb_s", "es_entries_s", "es_rows_s", "bnb_nodes", "bnb_depth"])
    backends = list(_backend.BACKENDS) if args.all_backends else [None]
    for b in backends:
        for r in crossover(args.n, args.k, ms, args.seed, backend=b, repeat=args.repeat):
            w.writerow([r.backend, r.m, r.n, r.k, r.n_distinct, f"{r.bnb_s:.6f}", f"{r.es_entries_s:.6f}",
                        f"{r.es_rows_s:.6f}", r.bnb_nodes, r.bnb_depth])
    if args.all_backends:
        sys.stderr.write(json.dumps(backend_speedups(seed=args.seed), indent=2) + "\n")
    return EXIT_OK


def cmd_movielens(args) -> int:
    from .movielens import project

    records, names = project(args.dir, args.genres)
    _emit(format_ratings_csv(records), args.out)
    sys.stderr.write("genres: " + ", ".join(f"{i + 1}={g}" for i, g in enumerate(names)) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rankclust", description=__doc__.splitlines()[0])
    p.add_argument("--backend", choices=sorted(_backend.BACKENDS), help="assignment kernel backend")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic rankings CSV (+ .json sidecar)")
    g.add_argument("kind", choices=["uniform", "swap", "tightness"])
    g.add_argument("--n", type=int, default=1000)
    g.add_argument("--m", type=int, default=5)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--omega", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("krca", help="cluster a rankings CSV; print a JSON report")
    r.add_argument("--input", required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--epsilon", type=float, default=1e-6)
    r.add_argument("--bnb-threshold", type=int, default=5)
    r.add_argument("--tol", type=float, default=1e-6)
    r.add_argument("--max-iter", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--labels", action="store_true", help="include per-entry labels")
    r.add_argument("--out")
    r.set_defaults(func=cmd_krca)

    i = sub.add_parser("ingest", help="lambda-filter a ratings CSV into a rankings CSV")
    i.add_argument("--ratings", required=True)
    i.add_argument("--lambda", dest="lam", type=int, required=True)
    i.add_argument("--genres", type=int, default=4)
    i.add_argument("--out")
    i.add_argument("--users-out", help="write retained user ids, one per line")
    i.set_defaults(func=cmd_ingest)

    e = sub.add_parser("experiment", help="prediction-accuracy experiment")
    e.add_argument("which", choices=["accuracy"])
    e.add_argument("--ratings", required=True)
    e.add_argument("--lambda", dest="lam", type=int, required=True)
    e.add_argument("--k", type=int, default=2)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--genres", type=int, default=4)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)

    o = sub.add_parser("oracle", help="exact optima or depth-bound tables as CSV")
    o.add_argument("what", choices=["objectives", "mu"])
    o.add_argument("--input")
    o.add_argument("--k", type=int, default=2)
    o.add_argument("--m-min", type=int, default=3)
    o.add_argument("--m-max", type=int, default=9)
    o.add_argument("--deltas", default="4,5,6")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="BnB vs exhaustive-search timings as CSV")
    b.add_argument("--n", type=int, default=100_000)
    b.add_argument("--k", type=int, default=10)
    b.add_argument("--ms", default="4,5,6,7,8")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=3)
    b.add_argument("--all-backends", action="store_true")
    b.set_defaults(func=cmd_bench)

    ml = sub.add_parser("movielens", help="project MovieLens files into the ratings schema")
    ml.add_argument("--dir", required=True)
    ml.add_argument("--genres", type=int, default=4)
    ml.add_argument("--out")
    ml.set_defaults(func=cmd_movielens)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.backend:
        _backend.DEFAULT = args.backend
    if args.command == "oracle" and args.what == "objectives" and not args.input:
        sys.stderr.write("oracle objectives: --input is required\n")
        return EXIT_INVALID
    try:
        return args.func(args)
    except (InfeasibleKError, GenerationError, TooLargeError) as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except (InvalidRankingError, EmptyDatasetError, RatingsError, ValueError, OSError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
