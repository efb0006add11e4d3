"""Timing harness: BnB vs exhaustive search, compiled vs pure-Python kernels.

Three reassignment routes are timed on the same centroids:

* ``bnb`` - the branch-and-bound tree over distinct rankings,
* ``es_entries`` - exhaustive search over distinct rankings,
* ``es_rows`` - exhaustive search over every observation, O(n m k); this is
  the route whose cost grows with ``n`` and against which BnB's insensitivity
  to repeated rankings pays off.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _backend
from .assignment import assign_bnb, assign_es
from .core import build_dataset
from .rng import StableRng


def best_time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


@dataclass(frozen=True)
class CrossoverRow:
    backend: str
    m: int
    n: int
    k: int
    n_distinct: int
    bnb_s: float
    es_entries_s: float
    es_rows_s: float
    bnb_nodes: int
    bnb_depth: int

    @property
    def bnb_faster(self) -> bool:
        return self.bnb_s < self.es_rows_s


def crossover(n: int = 100_000, k: int = 10, ms=(4, 5, 6, 7, 8), seed: int = 0,
              backend: str | None = None, repeat: int = 3) -> list[CrossoverRow]:
    backend = backend or _backend.DEFAULT
    impl = _backend.get(backend)
    out = []
    for m in ms:
        rng = StableRng(seed + m)
        rows = rng.permutations(n, m)
        centroids = rng.permutations(k, m)
        ds = build_dataset(rows)
        _, stats = assign_bnb(ds, centroids, 0.0, backend=backend, return_stats=True)
        out.append(
            CrossoverRow(
                backend=backend,
                m=m,
                n=n,
                k=k,
                n_distinct=ds.n_distinct,
                bnb_s=best_time(lambda: assign_bnb(ds, centroids, 0.0, backend=backend), repeat),
                es_entries_s=best_time(lambda: assign_es(ds, centroids, backend=backend), repeat),
                es_rows_s=best_time(lambda: impl.es_assign(rows, centroids), repeat),
                bnb_nodes=stats.created,
                bnb_depth=stats.max_depth,
            )
        )
    return out


def backend_speedups(n: int = 100_000, m: int = 5, k: int = 8, seed: int = 0, repeat: int = 3) -> dict:
    """Per-kernel timings for every available backend on one uniform instance."""
    rng = StableRng(seed)
    ds = build_dataset(rng.permutations(n, m))
    centroids = rng.permutations(k, m)
    res = {}
    for name in _backend.BACKENDS:
        res[name] = {
            "bnb_s": best_time(lambda: assign_bnb(ds, centroids, 0.0, backend=name), repeat),
            "es_entries_s": best_time(lambda: assign_es(ds, centroids, backend=name), repeat),
        }
    return res
