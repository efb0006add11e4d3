"""Ranking vectors, counted datasets and the integer clustering objective."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np


class InvalidRankingError(ValueError):
    """A row is not a permutation of ``1..m``."""

    def __init__(self, reason: str, row: int | None = None):
        self.reason = reason
        self.row = row
        msg = reason if row is None else f"row {row}: {reason}"
        super().__init__(msg)


class EmptyDatasetError(ValueError):
    pass


def rank_sum(m: int) -> int:
    return m * (m + 1) // 2


def rank_sq_sum(m: int) -> int:
    return m * (m + 1) * (2 * m + 1) // 6


@dataclass(frozen=True)
class Ranking:
    """An ``m``-vector holding each option's 1-based rank."""

    values: tuple[int, ...]

    def __post_init__(self):
        reason = _why_invalid(tuple(self.values))
        if reason is not None:
            raise InvalidRankingError(reason)
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @property
    def m(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    def __repr__(self) -> str:
        return f"Ranking({list(self.values)})"


def _why_invalid(values: Sequence[int]) -> str | None:
    m = len(values)
    if m == 0:
        return "empty input"
    seen = set()
    for v in values:
        if isinstance(v, (bool, np.bool_)) or int(v) != v:
            return f"non-integer entry {v!r}"
        v = int(v)
        if v < 1 or v > m:
            return f"entry {v} out of range 1..{m}"
        if v in seen:
            return f"duplicate entry {v}"
        seen.add(v)
    return None


def validate_ranking(values: Sequence[int]) -> Ranking:
    """Return ``values`` as a :class:`Ranking` or raise :class:`InvalidRankingError`."""
    values = list(values)
    reason = _why_invalid(values)
    if reason is not None:
        raise InvalidRankingError(reason)
    r = Ranking(tuple(values))
    m = r.m
    # Both identities follow from being a permutation; a failure is a bug.
    assert sum(r.values) == rank_sum(m)
    assert sum(v * v for v in r.values) == rank_sq_sum(m)
    return r


def is_ranking(values: Sequence[int]) -> bool:
    return _why_invalid(list(values)) is None


def sq_dist(x, y) -> int:
    """Squared Euclidean distance between two rankings (always even)."""
    a = np.asarray(x, dtype=np.int64)
    b = np.asarray(y, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    d = a - b
    return int(d @ d)


@dataclass(frozen=True, eq=False)
class CountedDataset:
    """Distinct rankings (first-appearance order) with multiplicities.

    ``rankings`` is a read-only ``(d, m)`` int64 array and ``counts`` a
    read-only length-``d`` int64 array. ``inverse`` maps each original input
    row to its entry, when the dataset was built from rows.
    """

    rankings: np.ndarray
    counts: np.ndarray
    inverse: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        R = np.ascontiguousarray(self.rankings, dtype=np.int64)
        c = np.ascontiguousarray(self.counts, dtype=np.int64)
        if R.ndim != 2 or c.shape != (R.shape[0],):
            raise ValueError("rankings must be (d, m) with one count per row")
        if np.any(c < 1):
            raise ValueError("every count must be >= 1")
        R.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "rankings", R)
        object.__setattr__(self, "counts", c)
        if self.inverse is not None:
            inv = np.asarray(self.inverse, dtype=np.int64)
            inv.setflags(write=False)
            object.__setattr__(self, "inverse", inv)

    @property
    def m(self) -> int:
        return int(self.rankings.shape[1])

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def n_distinct(self) -> int:
        return int(self.rankings.shape[0])

    def __len__(self) -> int:
        return self.n_distinct

    @property
    def entries(self) -> list[tuple[Ranking, int]]:
        return [(Ranking(tuple(r)), int(c)) for r, c in zip(self.rankings.tolist(), self.counts)]

    def expand(self) -> np.ndarray:
        """Rows repeated by their counts (entry order, not input order)."""
        return np.repeat(self.rankings, self.counts, axis=0)

    def subset(self, idx) -> "CountedDataset":
        idx = np.asarray(idx, dtype=np.int64)
        return CountedDataset(self.rankings[idx], self.counts[idx])

    def scaled(self, factor: int) -> "CountedDataset":
        """Same entries with every count multiplied by ``factor``."""
        return CountedDataset(self.rankings, self.counts * int(factor))


def _row_codes(X: np.ndarray) -> np.ndarray | None:
    m = X.shape[1]
    base = m + 1
    if m * np.log2(base) >= 62:
        return None
    weights = base ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return X @ weights


def _check_rows(X: np.ndarray) -> None:
    m = X.shape[1]
    if m == 0:
        raise InvalidRankingError("empty input", 0)
    bad = (X < 1) | (X > m)
    if bad.any():
        i = int(np.argmax(bad.any(axis=1)))
        raise InvalidRankingError(_why_invalid(X[i].tolist()) or "invalid", i)
    S = np.sort(X, axis=1)
    dup = (S != np.arange(1, m + 1)).any(axis=1)
    if dup.any():
        i = int(np.argmax(dup))
        raise InvalidRankingError(_why_invalid(X[i].tolist()) or "invalid", i)


def build_dataset(rows) -> CountedDataset:
    """Validate and deduplicate rows into a :class:`CountedDataset`.

    Entries keep first-appearance order; ``inverse[i]`` is the entry of row ``i``.
    """
    if isinstance(rows, np.ndarray):
        X = rows
    else:
        rows = list(rows)
        if not rows:
            raise EmptyDatasetError("empty dataset")
        lengths = {len(r) for r in rows}
        if len(lengths) != 1:
            m0 = len(rows[0])
            i = next(i for i, r in enumerate(rows) if len(r) != m0)
            raise InvalidRankingError(f"length {len(rows[i])} differs from {m0}", i)
        for i, r in enumerate(rows):
            for v in r:
                if isinstance(v, (bool, np.bool_)) or int(v) != v:
                    raise InvalidRankingError(f"non-integer entry {v!r}", i)
        X = np.asarray(rows, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDatasetError("empty dataset")
    X = np.ascontiguousarray(X, dtype=np.int64)
    _check_rows(X)

    codes = _row_codes(X)
    if codes is not None:
        _, first, inv = np.unique(codes, return_index=True, return_inverse=True)
    else:
        _, first, inv = np.unique(X, axis=0, return_index=True, return_inverse=True)
    inv = inv.reshape(-1)
    order = np.argsort(first, kind="stable")
    rank_of = np.empty_like(order)
    rank_of[order] = np.arange(order.size)
    inverse = rank_of[inv]
    counts = np.bincount(inverse, minlength=order.size)
    return CountedDataset(X[first[order]], counts, inverse)


def from_entries(entries: Iterable[tuple[Sequence[int], int]]) -> CountedDataset:
    """Dataset from explicit ``(ranking, count)`` pairs; duplicates are merged."""
    rows, counts = [], []
    for r, c in entries:
        rows.append(list(r))
        counts.append(int(c))
    if not rows:
        raise EmptyDatasetError("empty dataset")
    ds = build_dataset(rows)
    merged = np.bincount(ds.inverse, weights=counts, minlength=ds.n_distinct)
    return CountedDataset(ds.rankings, merged.astype(np.int64))


@dataclass(frozen=True, eq=False)
class KrcSolution:
    centroids: np.ndarray
    labels: np.ndarray
    objective: int

    @property
    def k(self) -> int:
        return int(self.centroids.shape[0])

    def to_dict(self) -> dict:
        return {
            "centroids": np.asarray(self.centroids).tolist(),
            "labels": np.asarray(self.labels).tolist(),
            "objective": int(self.objective),
        }


def entry_distances(ds: CountedDataset, centroids) -> np.ndarray:
    """``(d, k)`` exact squared distances from each entry to each centroid."""
    C = np.asarray(centroids, dtype=np.int64)
    if C.ndim != 2 or C.shape[1] != ds.m:
        raise ValueError(f"centroids must have shape (k, {ds.m})")
    # ||x - y||^2 = ||x||^2 + ||y||^2 - 2<x, y>, exact in int64
    xx = np.einsum("ij,ij->i", ds.rankings, ds.rankings)
    yy = np.einsum("ij,ij->i", C, C)
    return xx[:, None] + yy[None, :] - 2 * (ds.rankings @ C.T)


def objective(ds: CountedDataset, centroids, labels) -> int:
    """Count-weighted sum of squared distances from entries to their centroids."""
    C = np.asarray(centroids, dtype=np.int64)
    lab = np.asarray(labels, dtype=np.int64)
    if lab.shape != (ds.n_distinct,):
        raise ValueError("one label per dataset entry required")
    if C.ndim != 2 or C.shape[1] != ds.m:
        raise ValueError(f"centroids must have shape (k, {ds.m})")
    if lab.size and (lab.min() < 0 or lab.max() >= C.shape[0]):
        raise IndexError("label out of range")
    diff = ds.rankings - C[lab]
    return int(np.einsum("ij,ij->i", diff, diff) @ ds.counts)


def make_solution(ds: CountedDataset, centroids, labels) -> KrcSolution:
    C = np.asarray(centroids, dtype=np.int64).copy()
    lab = np.asarray(labels, dtype=np.int64).copy()
    return KrcSolution(C, lab, objective(ds, C, lab))


# --- CSV ranking format: one ranking per line, comma-separated, no header ---


def parse_rankings_csv(text: str) -> list[list[int]]:
    rows = []
    m = None
    for lineno, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line:
            continue
        try:
            row = [int(tok) for tok in line.split(",")]
        except ValueError:
            raise InvalidRankingError(f"non-integer token in line {lineno + 1}", len(rows))
        if m is None:
            m = len(row)
        elif len(row) != m:
            raise InvalidRankingError(f"length {len(row)} differs from {m}", len(rows))
        rows.append(row)
    return rows


def read_rankings_csv(path) -> CountedDataset:
    rows = parse_rankings_csv(Path(path).read_text())
    if not rows:
        raise EmptyDatasetError(f"{path}: no rankings")
    return build_dataset(rows)


def format_rankings_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([int(v) for v in r])
    return buf.getvalue()


def write_rankings_csv(path, rows) -> None:
    Path(path).write_text(format_rankings_csv(rows))
