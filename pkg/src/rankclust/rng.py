"""Seeded random streams with a fixed algorithm identity.

Every random draw in the package goes through :class:`StableRng`. It consumes
only the raw 64-bit output of numpy's ``PCG64`` bit generator, whose stream is
guaranteed stable across numpy releases, and derives integers, floats and
permutations with the formulas below rather than ``Generator`` methods (whose
algorithms numpy reserves the right to change).

* bounded integer in ``[0, b)``: ``((raw >> 32) * b) >> 32`` (multiply-shift on
  the high 32 bits; bias at most ``b / 2**32``)
* unit float in ``[0, 1)``: ``(raw >> 11) * 2**-53``
* permutation: Fisher-Yates, ``i = m-1 .. 1`` swapping slot ``i`` with a
  bounded draw in ``[0, i]``
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "pcg64-raw/mulshift32/fisher-yates-v1"

_U32 = np.uint64(32)
_U11 = np.uint64(11)


class StableRng:
    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)

    def raw(self, size: int) -> np.ndarray:
        return self._bits.random_raw(size)

    def bounded(self, bound, size: int | None = None) -> np.ndarray:
        """Integers uniform on ``[0, bound)``; ``bound`` may be an array."""
        bound = np.asarray(bound, dtype=np.uint64)
        if np.any(bound == 0):
            raise ValueError("bound must be positive")
        if size is None:
            size = bound.size if bound.ndim else 1
        hi = self.raw(size) >> _U32
        return ((hi * bound) >> _U32).astype(np.int64)

    def integer(self, bound: int) -> int:
        return int(self.bounded(bound, 1)[0])

    def uniform(self, size: int) -> np.ndarray:
        return (self.raw(size) >> _U11).astype(np.float64) * (1.0 / 9007199254740992.0)

    def weighted_index(self, weights) -> int:
        """Index drawn with probability proportional to ``weights``."""
        w = np.asarray(weights, dtype=np.float64)
        total = w.sum()
        if not total > 0:
            raise ValueError("weights must have positive sum")
        cdf = np.cumsum(w)
        u = self.uniform(1)[0] * cdf[-1]
        idx = int(np.searchsorted(cdf, u, side="right"))
        # guard the u == cdf[-1] rounding edge and zero-weight tails
        idx = min(idx, len(w) - 1)
        while w[idx] <= 0:
            idx -= 1
        return idx

    def permutations(self, n: int, m: int) -> np.ndarray:
        """``n`` independent uniform permutations of ``1..m`` (one per row)."""
        out = np.tile(np.arange(1, m + 1, dtype=np.int64), (n, 1))
        rows = np.arange(n)
        for i in range(m - 1, 0, -1):
            j = self.bounded(i + 1, n)
            tmp = out[rows, j]
            out[rows, j] = out[:, i]
            out[:, i] = tmp
        return out

    def bernoulli_half(self, size: int) -> np.ndarray:
        return (self.raw(size) >> np.uint64(63)).astype(bool)

    def spawn_seed(self) -> int:
        return int(self.raw(1)[0] >> np.uint64(1))
