"""From per-genre movie ratings to genre-preference rankings.

Ratings CSV schema (header required)::

    user_id,item_id,genre,rating

``genre`` is an integer in ``1..m``; ``user_id`` and ``item_id`` are opaque
strings. See :mod:`rankclust.movielens` for projecting the MovieLens files into
this schema.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import Ranking, build_dataset, entry_distances, format_rankings_csv
from .kmc import InfeasibleKError
from .krca import KrcaConfig, krca
from .rng import StableRng

FIELDS = ("user_id", "item_id", "genre", "rating")


class RatingsError(ValueError):
    pass


@dataclass(frozen=True)
class RatingsRecord:
    user_id: str
    item_id: str
    genre: int
    rating: float


def check_records(records: Sequence[RatingsRecord], m: int, scale: tuple[float, float] | None = None):
    for i, r in enumerate(records):
        if not 1 <= r.genre <= m:
            raise RatingsError(f"record {i}: genre {r.genre} outside 1..{m}")
        if not np.isfinite(r.rating):
            raise RatingsError(f"record {i}: rating {r.rating} not finite")
        if scale is not None and not scale[0] <= r.rating <= scale[1]:
            raise RatingsError(f"record {i}: rating {r.rating} outside {scale}")


def parse_ratings_csv(text: str) -> list[RatingsRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != FIELDS:
        raise RatingsError(f"header must be {','.join(FIELDS)}, got {reader.fieldnames}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            out.append(
                RatingsRecord(row["user_id"].strip(), row["item_id"].strip(), int(row["genre"]), float(row["rating"]))
            )
        except (TypeError, ValueError) as exc:
            raise RatingsError(f"line {lineno}: {exc}") from None
    return out


def read_ratings_csv(path) -> list[RatingsRecord]:
    return parse_ratings_csv(Path(path).read_text())


def format_ratings_csv(records: Iterable[RatingsRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in records:
        w.writerow([r.user_id, r.item_id, r.genre, repr(float(r.rating))])
    return buf.getvalue()


def genre_baseline(records: Sequence[RatingsRecord], m: int) -> np.ndarray:
    """Mean rating of each genre over all records."""
    sums = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    for r in records:
        sums[r.genre - 1] += r.rating
        counts[r.genre - 1] += 1
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise RatingsError(f"no records for genre(s) {(missing + 1).tolist()}")
    return sums / counts


def _per_user(records: Sequence[RatingsRecord], m: int):
    sums: dict[str, np.ndarray] = defaultdict(lambda: np.zeros(m))
    counts: dict[str, np.ndarray] = defaultdict(lambda: np.zeros(m, dtype=np.int64))
    for r in records:
        sums[r.user_id][r.genre - 1] += r.rating
        counts[r.user_id][r.genre - 1] += 1
    return sums, counts


def descending_ranks(values) -> Ranking:
    """Rank 1 for the largest value; ties go to the lower index first."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(-v, kind="stable")
    ranks = np.empty(v.size, dtype=np.int64)
    ranks[order] = np.arange(1, v.size + 1)
    return Ranking(tuple(ranks.tolist()))


def lambda_filter(
    records: Sequence[RatingsRecord], m: int, lam: int, baseline: np.ndarray | None = None
) -> list[tuple[str, Ranking]]:
    """Rankings of users with at least ``lam`` ratings in every genre.

    Coordinate ``g`` is the rank of the user's mean rating for genre ``g``
    minus the all-user genre mean, largest deviation first. Users are returned
    sorted by ``user_id``.
    """
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if baseline is None:
        baseline = genre_baseline(records, m)
    sums, counts = _per_user(records, m)
    out = []
    for user in sorted(counts):
        c = counts[user]
        if np.all(c >= lam):
            out.append((user, descending_ranks(sums[user] / c - baseline)))
    return out


def rankings_csv(pairs: Sequence[tuple[str, Ranking]]) -> str:
    return format_rankings_csv(r.values for _, r in pairs)


@dataclass(frozen=True)
class AccuracyReport:
    accuracy_pct: float
    retained_users: int
    correct: int
    lam: int
    k: int
    seed: int
    train_records: int
    test_records: int
    centroids: list
    test_ties: int
    tie_rule: str = "equidistant test users go to the lowest-index centroid"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def split_records(records: Sequence[RatingsRecord], seed: int):
    """Each record goes to train or test with probability 1/2."""
    to_test = StableRng(seed).bernoulli_half(len(records))
    train = [r for r, t in zip(records, to_test) if not t]
    test = [r for r, t in zip(records, to_test) if t]
    return train, test


def prediction_accuracy(records: Sequence[RatingsRecord], m: int, lam: int, k: int, seed: int) -> AccuracyReport:
    """Train/test agreement of cluster membership for double-filtered users.

    Records are split 50/50; each half is lambda-filtered on its own (with its
    own genre means) and only users present in both halves are kept. KRCA
    clusters the training rankings; a test user counts as correct when the
    training centroid nearest their test ranking is the one their training
    ranking was assigned to.
    """
    train, test = split_records(records, seed)
    if not train or not test:
        raise InfeasibleKError("split left one side empty")
    try:
        tr = dict(lambda_filter(train, m, lam))
        te = dict(lambda_filter(test, m, lam))
    except RatingsError as exc:
        raise InfeasibleKError(str(exc)) from None
    users = sorted(set(tr) & set(te))
    if len(users) < k:
        raise InfeasibleKError(f"{len(users)} double-filtered users, fewer than k={k}")
    train_rows = [tr[u].values for u in users]
    test_rows = [te[u].values for u in users]
    ds = build_dataset(train_rows)
    report = krca(ds, KrcaConfig(k=k, seed=seed))
    C = report.final.centroids
    train_label = report.final.labels[ds.inverse]
    test_ds = build_dataset(test_rows)
    D = entry_distances(test_ds, C)[test_ds.inverse]
    test_label = np.argmin(D, axis=1)
    ties = int(np.sum((D == D.min(axis=1, keepdims=True)).sum(axis=1) > 1))
    correct = int(np.sum(train_label == test_label))
    return AccuracyReport(
        accuracy_pct=100.0 * correct / len(users),
        retained_users=len(users),
        correct=correct,
        lam=lam,
        k=k,
        seed=seed,
        train_records=len(train),
        test_records=len(test),
        centroids=np.asarray(C).tolist(),
        test_ties=ties,
    )
