"""Real-valued k-means baseline over counted rankings, and snapping to rankings.

Seeding and Lloyd iterations work on distinct entries weighted by their
counts, which is distributionally identical to working row by row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .centroid import centroids_for_labels
from .core import CountedDataset, KrcSolution, make_solution
from .rng import StableRng

MAX_ITER = 5000
MIN_IMPROVEMENT = 1e-12


class InfeasibleKError(ValueError):
    """``k`` exceeds the number of distinct rankings."""


@dataclass(frozen=True, eq=False)
class KmcSolution:
    centroids: np.ndarray  # (k, m) float64
    labels: np.ndarray  # per entry
    objective: float
    iterations: int = 0
    history: tuple[float, ...] = field(default=(), repr=False)


def _check_k(ds: CountedDataset, k: int) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if ds.n_distinct == 0:
        raise ValueError("empty dataset")
    if k > ds.n_distinct:
        raise InfeasibleKError(f"k={k} exceeds {ds.n_distinct} distinct rankings")


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kmeanspp_seed(ds: CountedDataset, k: int, rng_seed: int) -> np.ndarray:
    """D^2 seeding over distinct entries, weighted by count."""
    _check_k(ds, k)
    rng = StableRng(rng_seed)
    X = ds.rankings.astype(np.float64)
    w = ds.counts.astype(np.float64)
    chosen = [rng.weighted_index(w)]
    closest = _sq_dists(X, X[chosen]).min(axis=1)
    for _ in range(1, k):
        # chosen entries have zero distance, so seeds stay distinct
        idx = rng.weighted_index(w * closest)
        chosen.append(idx)
        closest = np.minimum(closest, _sq_dists(X, X[[idx]])[:, 0])
    return X[chosen].copy()


def _weighted_objective(X, w, C, labels) -> float:
    diff = X - C[labels]
    return float(np.einsum("ij,ij->i", diff, diff) @ w)


def lloyd(ds: CountedDataset, k: int, rng_seed: int, max_iter: int = MAX_ITER) -> KmcSolution:
    C = kmeanspp_seed(ds, k, rng_seed)
    X = ds.rankings.astype(np.float64)
    w = ds.counts.astype(np.float64)
    labels = None
    history = []
    prev = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        D = _sq_dists(X, C)
        new_labels = np.argmin(D, axis=1)  # ties -> lowest centroid index
        sizes = np.bincount(new_labels, weights=w, minlength=k)
        if np.any(sizes == 0):
            new_labels = _reseed_empty(D, new_labels, w, k)
            sizes = np.bincount(new_labels, weights=w, minlength=k)
        sums = np.zeros_like(C)
        np.add.at(sums, new_labels, X * w[:, None])
        C = sums / sizes[:, None]
        obj = _weighted_objective(X, w, C, new_labels)
        history.append(obj)
        fixed = labels is not None and np.array_equal(new_labels, labels)
        labels = new_labels
        if fixed or prev - obj < MIN_IMPROVEMENT:
            break
        prev = obj
    return KmcSolution(C, labels.astype(np.int64), history[-1], it, tuple(history))


def _reseed_empty(D: np.ndarray, labels: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """Move the count-weighted farthest entry into each empty cluster."""
    labels = labels.copy()
    for c in range(k):
        sizes = np.bincount(labels, minlength=k)
        if sizes[c] > 0:
            continue
        own = D[np.arange(labels.size), labels] * w
        # never empty a donor: only entries in clusters with >= 2 entries
        movable = sizes[labels] >= 2
        own = np.where(movable, own, -1.0)
        labels[int(np.argmax(own))] = c
    return labels


def kmc_objective(ds: CountedDataset, labels, k: int) -> float:
    """v_KMC of a clustering with mean centroids."""
    X = ds.rankings.astype(np.float64)
    w = ds.counts.astype(np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    sizes = np.bincount(labels, weights=w, minlength=k)
    sums = np.zeros((k, ds.m))
    np.add.at(sums, labels, X * w[:, None])
    C = np.divide(sums, sizes[:, None], out=np.zeros_like(sums), where=sizes[:, None] > 0)
    return _weighted_objective(X, w, C, labels)


def snap_to_krc(ds: CountedDataset, kmc: KmcSolution) -> KrcSolution:
    """Keep the k-means clusters; replace each centroid by its optimal ranking."""
    labels = np.asarray(kmc.labels, dtype=np.int64)
    k = kmc.centroids.shape[0]
    C = centroids_for_labels(ds.rankings, ds.counts, labels, k)
    return make_solution(ds, C, labels)
