"""Exact oracles and executable checks for small instances.

Nothing here is used by the clustering path. These functions exist to certify
it: exhaustive KRC and k-means optima, the binary-vector <-> alternating-pair
ranking reduction, and the worst-case BnB depth bound for two opposite
centroids.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, factorial

import numpy as np
from scipy.optimize import linear_sum_assignment

from .centroid import TooLargeError
from .core import CountedDataset, Ranking, build_dataset, make_solution, KrcSolution
from .rng import StableRng

KRC_ENUM_MAX_M = 6
KRC_ENUM_BUDGET = 2_000_000
PARTITION_MAX_N = 10
MU_MAX_M = 9


# --- alternating-pair reduction -------------------------------------------


def _bits(z) -> list[int]:
    bits = [int(b) for b in z]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("entries must be 0 or 1")
    return bits


def alt_pair_transform(z) -> Ranking:
    """Map a binary vector of length eta to a ranking of length 2*eta.

    Pair ``(2j-1, 2j)`` holds ``(2j-1, 2j)`` when ``z_j = 0`` and is swapped
    when ``z_j = 1``.
    """
    bits = _bits(z)
    if not bits:
        raise ValueError("binary vector must be non-empty")
    x = []
    for j, b in enumerate(bits, start=1):
        lo, hi = 2 * j - 1, 2 * j
        x.extend((hi, lo) if b else (lo, hi))
    return Ranking(tuple(x))


def alt_pair_inverse(x) -> tuple[int, ...]:
    x = [int(v) for v in x]
    if not x or len(x) % 2:
        raise ValueError("alternating-pair rankings have even, positive length")
    z = []
    for j in range(1, len(x) // 2 + 1):
        pair = (x[2 * j - 2], x[2 * j - 1])
        if pair == (2 * j - 1, 2 * j):
            z.append(0)
        elif pair == (2 * j, 2 * j - 1):
            z.append(1)
        else:
            raise ValueError(f"coordinates {2 * j - 1},{2 * j} hold {pair}: not an alternating pair")
    return tuple(z)


def hamming(z, w) -> int:
    a, b = _bits(z), _bits(w)
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return sum(p != q for p, q in zip(a, b))


def hcp_optimum(Z, k: int) -> int:
    """Minimum total Hamming distance to ``k`` binary centroids (brute force)."""
    Z = np.asarray(Z, dtype=np.int64)
    eta = Z.shape[1]
    if eta > 10:
        raise TooLargeError("eta too large for brute force")
    cube = np.array(list(product((0, 1), repeat=eta)), dtype=np.int64)
    H = (Z[:, None, :] != cube[None, :, :]).sum(axis=2)
    kk = min(k, len(cube))
    return int(min(H[:, list(c)].min(axis=1).sum() for c in combinations(range(len(cube)), kk)))


# --- exact KRC / KMC optima --------------------------------------------------


def _all_rankings(m: int) -> np.ndarray:
    return np.array(list(permutations(range(1, m + 1))), dtype=np.int64)


def _set_partitions(n: int, k: int):
    """Restricted growth strings: labels of ``n`` items into at most ``k`` blocks."""
    labels = [0] * n

    def rec(i, used):
        if i == n:
            yield tuple(labels)
            return
        for b in range(min(used + 1, k)):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    if n == 0:
        return
    yield from rec(0, 0)


def _krc_by_centroids(ds: CountedDataset, k: int) -> KrcSolution:
    P = _all_rankings(ds.m)
    diff = ds.rankings[:, None, :] - P[None, :, :]
    D = np.einsum("ijk,ijk->ij", diff, diff)  # (d, m!)
    kk = min(k, P.shape[0])
    best_val, best_combo = None, None
    it = combinations(range(P.shape[0]), kk)
    chunk = 50_000
    while True:
        block = np.fromiter((i for c in _take(it, chunk) for i in c), dtype=np.int64)
        if block.size == 0:
            break
        idx = block.reshape(-1, kk)
        vals = ds.counts @ D[:, idx].min(axis=2)
        j = int(np.argmin(vals))
        if best_val is None or vals[j] < best_val:
            best_val, best_combo = int(vals[j]), idx[j]
    C = P[best_combo]
    labels = np.argmin(D[:, best_combo], axis=1)
    sol = make_solution(ds, C, labels)
    assert sol.objective == best_val
    return sol


def _take(it, n):
    for _ in range(n):
        try:
            yield next(it)
        except StopIteration:
            return


def _assignment_centroid(rows: np.ndarray) -> tuple[np.ndarray, int]:
    """Optimal ranking centroid of ``rows`` as a min-cost option-to-rank matching."""
    m = rows.shape[1]
    ranks = np.arange(1, m + 1)
    # cost[j, r] = sum_i (x_ij - r)^2
    cost = ((rows[:, :, None] - ranks[None, None, :]) ** 2).sum(axis=0)
    r_idx, c_idx = linear_sum_assignment(cost)
    y = np.empty(m, dtype=np.int64)
    y[r_idx] = ranks[c_idx]
    return y, int(cost[r_idx, c_idx].sum())


def _krc_by_partitions(ds: CountedDataset, k: int) -> KrcSolution:
    rows = ds.expand()
    n = rows.shape[0]
    if n > PARTITION_MAX_N:
        raise TooLargeError(f"n={n} exceeds partition-enumeration cap {PARTITION_MAX_N}")

    @lru_cache(maxsize=None)
    def block(mask: int):
        members = [i for i in range(n) if mask >> i & 1]
        return _assignment_centroid(rows[members])

    best = None
    for lab in _set_partitions(n, k):
        masks = [0] * k
        for i, b in enumerate(lab):
            masks[b] |= 1 << i
        val = sum(block(mk)[1] for mk in masks if mk)
        if best is None or val < best[0]:
            best = (val, lab, masks)
    val, _, masks = best
    C = [block(mk)[0] if mk else np.arange(1, ds.m + 1) for mk in masks]
    # label entries by nearest chosen centroid; this is optimal for the chosen set
    C = np.array(C, dtype=np.int64)
    diff = ds.rankings[:, None, :] - C[None, :, :]
    labels = np.argmin(np.einsum("ijk,ijk->ij", diff, diff), axis=1)
    sol = make_solution(ds, C, labels)
    assert sol.objective == val
    return sol


def exact_krc_oracle(
    ds: CountedDataset,
    k: int,
    method: str = "auto",
    max_m: int = KRC_ENUM_MAX_M,
    budget: int = KRC_ENUM_BUDGET,
) -> tuple[KrcSolution, int]:
    """Global KRC optimum by enumeration.

    ``method="centroids"`` tries every set of ``k`` rankings as centroids;
    ``method="partitions"`` tries every split of the (expanded) rows into at
    most ``k`` groups and solves each group's centroid as an assignment
    problem. ``"auto"`` prefers centroid enumeration when it fits the budget.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    fits = ds.m <= max_m and comb(factorial(ds.m), min(k, factorial(ds.m))) <= budget
    if method == "auto":
        method = "centroids" if fits else "partitions"
    if method == "centroids":
        if not fits:
            raise TooLargeError(f"centroid enumeration for m={ds.m}, k={k} exceeds budget")
        sol = _krc_by_centroids(ds, k)
    elif method == "partitions":
        sol = _krc_by_partitions(ds, k)
    else:
        raise ValueError(f"unknown method {method!r}")
    return sol, sol.objective


def exact_kmc_oracle(ds: CountedDataset, k: int) -> float:
    """Global k-means optimum over all splits of the rows into at most ``k`` groups."""
    rows = ds.expand()
    n = rows.shape[0]
    if n > PARTITION_MAX_N:
        raise TooLargeError(f"n={n} exceeds partition-enumeration cap {PARTITION_MAX_N}")
    sq = [int(r @ r) for r in rows]
    rows_l = rows.tolist()

    @lru_cache(maxsize=None)
    def block(mask: int) -> Fraction:
        members = [i for i in range(n) if mask >> i & 1]
        s = np.sum([rows_l[i] for i in members], axis=0)
        return sum(sq[i] for i in members) - Fraction(int(s @ s), len(members))

    best = None
    for lab in _set_partitions(n, k):
        masks = [0] * k
        for i, b in enumerate(lab):
            masks[b] |= 1 << i
        val = sum((block(mk) for mk in masks if mk), Fraction(0))
        if best is None or val < best:
            best = val
    return float(best)


# --- BnB depth bound for opposite centroids ----------------------------------


def _feasible_prefixes(m: int, depth: int, delta_sq: int):
    """Prefixes of length ``depth`` with sum_j (x_j - j)^2 <= delta_sq."""
    used = [False] * (m + 1)
    prefix: list[int] = []

    def rec(j, acc):
        if j == depth:
            yield tuple(prefix), acc
            return
        pos = j + 1
        for v in range(1, m + 1):
            if used[v]:
                continue
            c = acc + (v - pos) ** 2
            if c > delta_sq:
                continue
            used[v] = True
            prefix.append(v)
            yield from rec(j + 1, c)
            prefix.pop()
            used[v] = False

    yield from rec(0, 0)


def depth_bound_terms(m: int, depth: int, delta: int) -> tuple[int, int]:
    """``(UUB, LLB)`` at tree level ``depth`` for centroids identity / reversal."""
    dsq = delta * delta
    uub = None
    llb = None
    positions = range(depth + 1, m + 1)
    for f, acc in _feasible_prefixes(m, depth, dsq):
        rest = sorted(set(range(1, m + 1)) - set(f), reverse=True)
        full = acc + sum((v - p) ** 2 for v, p in zip(rest, positions))
        far = sum((v - (m - j)) ** 2 for j, v in enumerate(f))
        uub = full if uub is None else max(uub, full)
        llb = far if llb is None else min(llb, far)
    return uub, llb


def mu_depth_bound(m: int, delta: int, max_m: int = MU_MAX_M) -> int:
    """Worst-case BnB tree depth when every ranking lies within ``delta`` of
    ``[1..m]`` or ``[m..1]``: the first level where the largest possible
    distance to the near centroid cannot exceed the smallest possible prefix
    distance to the far one, capped at ``m``."""
    if m < 1 or delta < 0:
        raise ValueError("need m >= 1 and delta >= 0")
    if m > max_m:
        raise TooLargeError(f"m={m} exceeds cap {max_m}")
    for depth in range(1, m + 1):
        uub, llb = depth_bound_terms(m, depth, delta)
        if uub <= llb:
            return depth
    return m


def delta_clustered(m: int, delta: int, n: int, seed: int) -> CountedDataset:
    """``n`` rankings drawn uniformly from those within ``delta`` of the
    identity or of its reversal."""
    if m > 9:
        raise TooLargeError("enumerates all m! rankings; m <= 9")
    P = _all_rankings(m)
    ident = np.arange(1, m + 1)
    near1 = ((P - ident) ** 2).sum(axis=1) <= delta * delta
    near2 = ((P - ident[::-1]) ** 2).sum(axis=1) <= delta * delta
    pool = P[near1 | near2]
    idx = StableRng(seed).bounded(len(pool), n)
    return build_dataset(pool[idx])
