"""The KRCA refinement loop and its report."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .assignment import BNB_THRESHOLD, auto_assign
from .centroid import centroids_for_labels
from .core import CountedDataset, KrcSolution, entry_distances, make_solution
from .kmc import InfeasibleKError, lloyd, snap_to_krc

INFINITE_IMPROVEMENT = math.inf
PATIENCE = 3


@dataclass(frozen=True)
class KrcaConfig:
    k: int
    epsilon: float = 1e-6
    bnb_threshold: int = BNB_THRESHOLD
    tol: float = 1e-6
    max_outer_iter: int = 1000
    seed: int = 0
    backend: str | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.tol < 0:
            raise ValueError("tol must be non-negative")
        if self.max_outer_iter < 0:
            raise ValueError("max_outer_iter must be non-negative")


@dataclass(frozen=True, eq=False)
class KrcaReport:
    baseline: KrcSolution
    final: KrcSolution
    iterations: int
    per_iteration_objectives: tuple[int, ...]
    relative_improvement_pct: float
    wall_time: float
    kmc_objective: float = float("nan")
    assign_stats: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        rel = self.relative_improvement_pct
        return {
            "baseline": self.baseline.to_dict(),
            "final": self.final.to_dict(),
            "iterations": self.iterations,
            "per_iteration_objectives": [int(v) for v in self.per_iteration_objectives],
            "relative_improvement_pct": rel if math.isfinite(rel) else "inf",
            "wall_time": self.wall_time,
            "kmc_objective": self.kmc_objective,
            "assign_stats": self.assign_stats,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def relative_improvement(v_baseline: int, v_final: int) -> float:
    """Percentage reduction of the baseline objective, measured against the final one."""
    if v_final == 0:
        return 0.0 if v_baseline == 0 else INFINITE_IMPROVEMENT
    return (v_baseline - v_final) / v_final * 100.0


def empty_cluster_repair(labels, centroids, ds: CountedDataset) -> np.ndarray:
    """Give every empty cluster the entry farthest from its current centroid.

    The moved entry comes from a cluster holding at least two entries, so no
    donor is emptied; ties go to the lowest entry index.
    """
    labels = np.asarray(labels, dtype=np.int64).copy()
    C = np.asarray(centroids, dtype=np.int64)
    k = C.shape[0]
    sizes = np.bincount(labels, minlength=k)
    if not np.any(sizes == 0):
        return labels
    if ds.n_distinct < k:
        raise InfeasibleKError(f"k={k} exceeds {ds.n_distinct} distinct rankings")
    own = entry_distances(ds, C)[np.arange(ds.n_distinct), labels]
    for c in np.flatnonzero(sizes == 0):
        movable = sizes[labels] >= 2
        cand = np.where(movable, own, -1)
        i = int(np.argmax(cand))
        sizes[labels[i]] -= 1
        labels[i] = c
        sizes[c] += 1
        own[i] = -1  # a moved entry now sits alone in its cluster
    return labels


def _refit(ds: CountedDataset, labels, k: int) -> KrcSolution:
    C = centroids_for_labels(ds.rankings, ds.counts, labels, k)
    return make_solution(ds, C, labels)


def krca(ds: CountedDataset, cfg: KrcaConfig, baseline: KrcSolution | None = None) -> KrcaReport:
    """Refine a snapped k-means baseline by alternating centroid and label updates.

    Each iteration reassigns entries to the current centroids, repairs empty
    clusters, then recomputes the optimal centroid of every cluster. The loop
    stops on a label fixed point, on an improvement below ``cfg.tol`` (with
    ``epsilon == 0``), after ``PATIENCE`` non-improving iterations (with
    ``epsilon > 0``), or at ``cfg.max_outer_iter``. The best solution seen is
    returned.
    """
    t0 = time.perf_counter()
    if cfg.k > ds.n_distinct:
        raise InfeasibleKError(f"k={cfg.k} exceeds {ds.n_distinct} distinct rankings")
    kmc_obj = float("nan")
    if baseline is None:
        kmc = lloyd(ds, cfg.k, cfg.seed)
        kmc_obj = kmc.objective
        baseline = snap_to_krc(ds, kmc)
    current = baseline
    best = baseline
    history = [int(baseline.objective)]
    stats = []
    stale = 0
    it = 0
    while it < cfg.max_outer_iter:
        it += 1
        labels, st = auto_assign(
            ds, current.centroids, cfg.epsilon, cfg.bnb_threshold, backend=cfg.backend, return_stats=True
        )
        stats.append(st.to_dict())
        labels = empty_cluster_repair(labels, current.centroids, ds)
        nxt = _refit(ds, labels, cfg.k)
        history.append(int(nxt.objective))
        improvement = best.objective - nxt.objective
        fixed_point = np.array_equal(labels, current.labels)
        current = nxt
        if nxt.objective < best.objective:
            best = nxt
        if fixed_point:
            break
        if cfg.epsilon == 0:
            if improvement < cfg.tol:
                break
        else:
            stale = stale + 1 if improvement < cfg.tol else 0
            if stale >= PATIENCE:
                break
    return KrcaReport(
        baseline=baseline,
        final=best,
        iterations=it,
        per_iteration_objectives=tuple(history),
        relative_improvement_pct=relative_improvement(baseline.objective, best.objective),
        wall_time=time.perf_counter() - t0,
        kmc_objective=kmc_obj,
        assign_stats=stats,
    )
