"""Compiled vs pure-Python kernels, and the BnB / exhaustive-search crossover.

    python3 benchmarks/bench_backends.py [--n 100000] [--k 10] [--quick]
"""

import argparse

from rankclust import _backend
from rankclust.bench import backend_speedups, crossover


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true", help="skip the slow pure-Python m=8 run")
    args = ap.parse_args()

    print("kernel timings, n=100000 m=5 k=8 (best of 3, seconds)")
    speed = backend_speedups(seed=args.seed)
    for name, row in speed.items():
        print(f"  {name:7s} bnb {row['bnb_s']:.5f}  es {row['es_entries_s']:.5f}")
    if "cython" in speed:
        py, cy = speed["python"], speed["cython"]
        print(f"  speedup bnb x{py['bnb_s'] / cy['bnb_s']:.1f}  es x{py['es_entries_s'] / cy['es_entries_s']:.1f}")

    print(f"\ncrossover on uniform data, n={args.n} k={args.k} (ms)")
    print(f"{'backend':8s}{'m':>3s}{'distinct':>10s}{'bnb':>10s}{'es_rows':>10s}{'es_dedup':>10s}  winner")
    for name in _backend.BACKENDS:
        ms = (4, 5, 6, 7) if args.quick and name == "python" else (4, 5, 6, 7, 8)
        for r in crossover(args.n, args.k, ms, args.seed, backend=name):
            print(
                f"{name:8s}{r.m:3d}{r.n_distinct:10d}{r.bnb_s * 1e3:10.2f}{r.es_rows_s * 1e3:10.2f}"
                f"{r.es_entries_s * 1e3:10.2f}  {'bnb' if r.bnb_faster else 'es'}"
            )


if __name__ == "__main__":
    main()
