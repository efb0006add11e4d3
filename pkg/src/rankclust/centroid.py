"""Optimal ranking-vector centroid of a single cluster.

The closed form ranks the per-option mean ranks: the option with the smallest
average rank gets rank 1, and so on. ``brute_force_centroid`` enumerates every
permutation and exists only to certify the closed form on small ``m``.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .core import CountedDataset, EmptyDatasetError, Ranking

BRUTE_FORCE_MAX_M = 8


class TooLargeError(ValueError):
    """An enumeration would exceed its configured cap."""


def column_means(cluster: CountedDataset) -> np.ndarray:
    if cluster.n_distinct == 0:
        raise EmptyDatasetError("empty cluster")
    return (cluster.counts @ cluster.rankings) / cluster.n


def rank_of_means(means) -> Ranking:
    """1-based ascending ranks of ``means``; ties go to the lower index first."""
    means = np.asarray(means, dtype=np.float64)
    order = np.argsort(means, kind="stable")
    ranks = np.empty(means.size, dtype=np.int64)
    ranks[order] = np.arange(1, means.size + 1)
    return Ranking(tuple(ranks.tolist()))


def _weighted_cost(rankings: np.ndarray, counts: np.ndarray, y: np.ndarray) -> int:
    d = rankings - y
    return int(np.einsum("ij,ij->i", d, d) @ counts)


def optimal_centroid(cluster: CountedDataset) -> tuple[Ranking, int]:
    y = rank_of_means(column_means(cluster))
    return y, _weighted_cost(cluster.rankings, cluster.counts, y.as_array())


def centroids_for_labels(rankings, counts, labels, k: int) -> np.ndarray:
    """Closed-form centroid of every cluster given entry labels.

    Vectorised over clusters; an empty cluster gets the identity ranking
    (callers repair empty clusters before this matters).
    """
    rankings = np.asarray(rankings, dtype=np.int64)
    m = rankings.shape[1]
    sums = np.zeros((k, m), dtype=np.int64)
    np.add.at(sums, labels, rankings * counts[:, None])
    # sums share the positive cluster size as denominator, so ranking the
    # integer column sums ranks the means
    order = np.argsort(sums, axis=1, kind="stable")
    C = np.empty((k, m), dtype=np.int64)
    np.put_along_axis(C, order, np.arange(1, m + 1)[None, :].repeat(k, axis=0), axis=1)
    return C


def brute_force_centroid(cluster: CountedDataset, max_m: int = BRUTE_FORCE_MAX_M) -> tuple[Ranking, int]:
    """Exhaustive minimum over all ``m!`` centroids; ties -> lexicographically smallest."""
    if cluster.n_distinct == 0:
        raise EmptyDatasetError("empty cluster")
    m = cluster.m
    if m > max_m:
        raise TooLargeError(f"m={m} exceeds brute-force cap {max_m}")
    P = np.array(list(permutations(range(1, m + 1))), dtype=np.int64)  # lexicographic
    s = cluster.counts @ cluster.rankings
    xx = int(cluster.counts @ np.einsum("ij,ij->i", cluster.rankings, cluster.rankings))
    costs = xx + cluster.n * np.einsum("ij,ij->i", P, P) - 2 * (P @ s)
    best = int(np.argmin(costs))
    y = P[best]
    return Ranking(tuple(y.tolist())), _weighted_cost(cluster.rankings, cluster.counts, y)
