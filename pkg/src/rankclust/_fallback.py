"""Pure-Python/numpy assignment kernels.

Same signatures and outputs as the compiled ``_kernels`` module; used when the
extension is unavailable or ``RANKCLUST_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import numpy as np


def es_assign(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    C = np.asarray(C, dtype=np.int64)
    out = np.empty(X.shape[0], dtype=np.int64)
    yy = np.einsum("ij,ij->i", C, C)
    step = max(1, (1 << 20) // max(1, C.shape[0]))
    for lo in range(0, X.shape[0], step):
        # ||x||^2 is common to every centroid, so it drops out of the argmin
        D = yy[None, :] - 2 * (X[lo : lo + step] @ C.T)
        out[lo : lo + step] = np.argmin(D, axis=1)
    return out


def bnb_assign(X: np.ndarray, C: np.ndarray, epsilon: float):
    """Branch-and-bound nearest-centroid labels for lexicographically sorted ``X``.

    Returns ``(labels, (created, expanded, max_depth, eliminations, leaf_fallbacks))``.
    """
    X = np.asarray(X, dtype=np.int64)
    C = np.asarray(C, dtype=np.int64)
    d, m = X.shape
    k = C.shape[0]
    labels = np.full(d, -1, dtype=np.int64)
    if d == 0:
        return labels, (0, 0, 0, 0, 0)
    if k == 1:
        labels[:] = 0
        return labels, (0, 0, 0, 0, 0)

    Cl = C.tolist()
    # sorted centroid suffixes: suffix[y][t] = sorted(C[y, t:])
    suffix = [[sorted(row[t:]) for t in range(m + 1)] for row in Cl]
    col = [X[:, t].tolist() for t in range(m)]
    used = [False] * (m + 1)
    stats = [0, 0, 0, 0, 0]
    eps = float(epsilon)

    def expand(lo, hi, t, surv, fixed):
        stats[1] += 1
        column = col[t]
        r = lo
        while r < hi:
            j = column[r]
            s = r
            while r < hi and column[r] == j:
                r += 1
            stats[0] += 1
            depth = t + 1
            if depth > stats[2]:
                stats[2] = depth
            used[j] = True
            rem = [v for v in range(1, m + 1) if not used[v]]
            rrem = rem[::-1]
            child_fixed = {}
            lbs, ubs = [], []
            for y in surv:
                f = fixed[y] + (Cl[y][t] - j) ** 2
                child_fixed[y] = f
                ys = suffix[y][depth]
                lbs.append(f + sum((a - b) ** 2 for a, b in zip(ys, rem)))
                ubs.append(f + sum((a - b) ** 2 for a, b in zip(ys, rrem)))
            alive = [True] * len(surv)
            for q in range(len(surv) - 1, -1, -1):
                others = [ubs[p] for p in range(len(surv)) if p != q and alive[p]]
                if others and lbs[q] >= min(others) - eps:
                    alive[q] = False
                    stats[3] += 1
            child = [y for y, a in zip(surv, alive) if a]
            if len(child) == 1:
                labels[s:r] = child[0]
            elif depth == m:
                exact = [lb for lb, a in zip(lbs, alive) if a]
                labels[s:r] = child[exact.index(min(exact))]
                stats[4] += 1
            else:
                expand(s, r, depth, child, child_fixed)
            used[j] = False

    expand(0, d, 0, list(range(k)), {y: 0 for y in range(k)})
    return labels, tuple(stats)
