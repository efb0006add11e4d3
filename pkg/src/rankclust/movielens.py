"""Project MovieLens ``ratings.csv`` + ``movies.csv`` into the ratings schema.

Only movies carrying exactly one genre are kept, and of those only the ``m``
genres with the most ratings. Genres are numbered ``1..m`` by descending rating
count (ties by name). The dataset itself is not bundled; point the adapter at
an extracted ``ml-25m`` directory (or any directory with the same two files).
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

from .ingest import RatingsRecord

NO_GENRE = "(no genres listed)"


def single_genre_movies(movies_csv) -> dict[str, str]:
    out = {}
    with open(movies_csv, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            genres = row["genres"].split("|")
            if len(genres) == 1 and genres[0] != NO_GENRE:
                out[row["movieId"]] = genres[0]
    return out


def project(directory, m: int = 4) -> tuple[list[RatingsRecord], list[str]]:
    """Return ``(records, genre_names)``; ``genre_names[g-1]`` names genre ``g``."""
    directory = Path(directory)
    genre_of = single_genre_movies(directory / "movies.csv")
    kept = []
    freq: Counter[str] = Counter()
    with open(directory / "ratings.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            g = genre_of.get(row["movieId"])
            if g is None:
                continue
            freq[g] += 1
            kept.append((row["userId"], row["movieId"], g, float(row["rating"])))
    top = sorted(freq, key=lambda g: (-freq[g], g))[:m]
    index = {g: i + 1 for i, g in enumerate(top)}
    records = [RatingsRecord(u, it, index[g], r) for u, it, g, r in kept if g in index]
    return records, top
