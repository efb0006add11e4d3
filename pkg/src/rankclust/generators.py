"""Synthetic ranking datasets."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import CountedDataset, build_dataset, sq_dist
from .rng import StableRng

CENTROID_RETRY_CAP = 100_000


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SwapClusterSpec:
    n: int
    m: int
    k: int
    omega: int
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def gen_uniform(n: int, m: int, seed: int) -> CountedDataset:
    """``n`` i.i.d. uniform permutations of ``1..m``."""
    return build_dataset(uniform_rows(n, m, seed))


def uniform_rows(n: int, m: int, seed: int) -> np.ndarray:
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    return StableRng(seed).permutations(n, m)


def _swap_walk_rows(Y: np.ndarray, omega: int, rng: StableRng) -> np.ndarray:
    """Apply ``omega`` random value swaps (l <-> l+1) to every row of ``Y``."""
    X = np.array(Y, dtype=np.int64, copy=True)
    n, m = X.shape
    if m < 2 or omega == 0:
        return X
    # inverse permutation: pos[r, v-1] is the position holding value v
    pos = np.argsort(X, axis=1)
    rows = np.arange(n)
    for _ in range(omega):
        l = rng.bounded(m - 1, n)  # swap values l+1 and l+2 (1-based)
        p = pos[rows, l].copy()
        q = pos[rows, l + 1].copy()
        X[rows, p] = l + 2
        X[rows, q] = l + 1
        pos[rows, l] = q
        pos[rows, l + 1] = p
    return X


def swap_walk(y, omega: int, seed: int) -> np.ndarray:
    """Random walk of ``omega`` swaps of consecutive values starting at ``y``."""
    if omega < 0:
        raise ValueError("omega must be >= 0")
    Y = np.asarray(y, dtype=np.int64)[None, :]
    return _swap_walk_rows(Y, omega, StableRng(seed))[0]


def apply_value_swaps(y, swaps) -> np.ndarray:
    """Swap the positions of values ``l`` and ``l+1`` for each ``l`` in ``swaps``."""
    x = np.asarray(y, dtype=np.int64).copy()
    for l in swaps:
        p, q = int(np.flatnonzero(x == l)[0]), int(np.flatnonzero(x == l + 1)[0])
        x[p], x[q] = l + 1, l
    return x


def draw_separated_centroids(m: int, k: int, min_sq_dist: float, rng: StableRng,
                             retry_cap: int = CENTROID_RETRY_CAP) -> np.ndarray:
    """``k`` uniform rankings with pairwise squared distance strictly above ``min_sq_dist``."""
    chosen: list[np.ndarray] = []
    tries = 0
    while len(chosen) < k:
        if tries >= retry_cap:
            raise GenerationError(
                f"could not place {k} centroids in m={m} with distance > {min_sq_dist} "
                f"after {retry_cap} draws"
            )
        tries += 1
        cand = rng.permutations(1, m)[0]
        if all(sq_dist(cand, c) > min_sq_dist for c in chosen):
            chosen.append(cand)
    return np.array(chosen, dtype=np.int64)


def gen_swap_clustered(spec: SwapClusterSpec):
    """Clustered dataset: each row is a swap walk from a uniformly chosen centroid.

    Returns ``(dataset, true_centroids, true_row_labels)``; row labels follow
    generation order (use ``dataset.inverse`` to map rows to entries).
    """
    if spec.n < 1 or spec.m < 1 or spec.k < 1 or spec.omega < 0:
        raise ValueError(f"invalid spec {spec}")
    rng = StableRng(spec.seed)
    centroids = draw_separated_centroids(spec.m, spec.k, 2 * spec.omega**2, rng)
    labels = rng.bounded(spec.k, spec.n)
    rows = _swap_walk_rows(centroids[labels], spec.omega, rng)
    return build_dataset(rows), centroids, labels


def tightness_block(k: int) -> int:
    """Smallest eta with (eta-1) eta (eta+1) / 3 >= 4k."""
    eta = 1
    while (eta - 1) * eta * (eta + 1) < 12 * k:
        eta += 1
    return eta


def tightness_rows(k: int) -> np.ndarray:
    """The ``2k`` rankings whose KRC optimum is exactly twice the k-means optimum."""
    if k < 1:
        raise ValueError("k must be >= 1")
    mb = tightness_block(k)
    m = mb * (k - 1) + 2 * k
    n = 2 * k
    X = np.empty((n, m), dtype=np.int64)
    X[0] = np.arange(1, m + 1)
    for i in range(2, n + 1):  # 1-based row index
        if i % 2:
            theta, lam = (mb + 2) * ((i - 1) // 2 - 1) + 2, mb
        else:
            theta, lam = (mb + 2) * (i // 2 - 1), 2
        for j in range(1, m + 1):
            if j <= theta:
                X[i - 1, j - 1] = X[i - 2, j - 1]
            elif j <= theta + lam:
                X[i - 1, j - 1] = lam + 2 * theta - j + 1
            else:
                X[i - 1, j - 1] = j
    return X


def gen_tightness(k: int):
    """Returns ``(dataset, m, expected_v_krc, expected_v_kmc)`` = (.., .., 2k, k)."""
    X = tightness_rows(k)
    return build_dataset(X), X.shape[1], 2 * k, k
