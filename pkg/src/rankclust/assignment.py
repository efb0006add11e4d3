"""Cluster reconstruction: nearest-centroid labels for fixed ranking centroids.

Two routes produce the labels. Exhaustive search (ES) compares every distinct
entry with every centroid. The branch-and-bound tree (BnB) fixes ranking
prefixes one coordinate at a time; at each node, every surviving centroid gets
an interval ``[lb, ub]`` bracketing its distance to all members, and a centroid
whose ``lb`` reaches the smallest competing ``ub`` minus ``epsilon`` is dropped.
Members of a node with one survivor are labelled without further work, so the
tree size depends on the distinct prefixes present, not on how many times each
ranking occurs.

With ``epsilon == 0`` BnB reproduces the ES objective exactly. For positive
``epsilon`` the total objective exceeds the ES one by at most
``n * (k - 1) * epsilon``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import CountedDataset

BNB_THRESHOLD = 5


@dataclass(frozen=True)
class CentroidBounds:
    lb: int
    ub: int


@dataclass(frozen=True)
class BnbStats:
    """Instrumentation for one BnB call.

    ``created`` counts child nodes, ``expanded`` nodes whose children were
    generated (root included) and ``max_depth`` the deepest created node.
    """

    created: int = 0
    expanded: int = 0
    max_depth: int = 0
    eliminations: int = 0
    leaf_fallbacks: int = 0
    method: str = "bnb"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _centroid_array(ds: CountedDataset, centroids) -> np.ndarray:
    C = np.asarray(centroids, dtype=np.int64)
    if C.ndim != 2 or C.shape[0] < 1:
        raise ValueError("at least one centroid required")
    if C.shape[1] != ds.m:
        raise ValueError(f"dimension mismatch: centroids have m={C.shape[1]}, data m={ds.m}")
    return C


def assign_es(ds: CountedDataset, centroids, backend: str | None = None) -> np.ndarray:
    """Label each entry with its nearest centroid (ties -> lowest index)."""
    C = _centroid_array(ds, centroids)
    return _backend.get(backend).es_assign(ds.rankings, C)


def node_bounds(prefix, centroid) -> CentroidBounds:
    """Distance bounds between ``centroid`` and any ranking starting with ``prefix``."""
    y = [int(v) for v in centroid]
    f = [int(v) for v in prefix]
    m = len(y)
    t = len(f)
    if t > m or len(set(f)) != t or any(v < 1 or v > m for v in f):
        raise ValueError("prefix must hold distinct values in 1..m")
    fixed = sum((a - b) ** 2 for a, b in zip(y[:t], f))
    ys = sorted(y[t:])
    rem = sorted(set(range(1, m + 1)) - set(f))
    lb = fixed + sum((a - b) ** 2 for a, b in zip(ys, rem))
    ub = fixed + sum((a - b) ** 2 for a, b in zip(ys, rem[::-1]))
    return CentroidBounds(lb, ub)


def lex_order(rankings: np.ndarray) -> np.ndarray:
    return np.lexsort(np.asarray(rankings).T[::-1])


def assign_bnb(
    ds: CountedDataset,
    centroids,
    epsilon: float = 0.0,
    backend: str | None = None,
    return_stats: bool = False,
):
    """Branch-and-bound labels; optionally also a :class:`BnbStats` record."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    C = _centroid_array(ds, centroids)
    order = lex_order(ds.rankings)
    sorted_labels, raw = _backend.get(backend).bnb_assign(ds.rankings[order], C, float(epsilon))
    labels = np.empty_like(sorted_labels)
    labels[order] = sorted_labels
    if return_stats:
        return labels, BnbStats(*raw)
    return labels


def auto_assign(
    ds: CountedDataset,
    centroids,
    epsilon: float = 0.0,
    bnb_threshold: int = BNB_THRESHOLD,
    backend: str | None = None,
    return_stats: bool = False,
):
    """BnB when ``m <= bnb_threshold``, ES otherwise."""
    if ds.m <= bnb_threshold:
        return assign_bnb(ds, centroids, epsilon, backend=backend, return_stats=return_stats)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    labels = assign_es(ds, centroids, backend=backend)
    if return_stats:
        return labels, BnbStats(method="es")
    return labels
