from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankclust.centroid import (
    TooLargeError,
    brute_force_centroid,
    centroids_for_labels,
    column_means,
    optimal_centroid,
    rank_of_means,
)
from rankclust.core import build_dataset, from_entries

from conftest import random_dataset


def test_column_means_examples():
    assert column_means(build_dataset([[1, 2], [2, 1]])).tolist() == [1.5, 1.5]
    ds = from_entries([([1, 2, 3, 4], 2), ([1, 2, 4, 3], 1)])
    # oracle: exact fractions summed independently
    ref = [Fraction(2 * a + b, 3) for a, b in zip([1, 2, 3, 4], [1, 2, 4, 3])]
    assert ref == [1, 2, Fraction(10, 3), Fraction(11, 3)]
    assert np.allclose(column_means(ds), [float(v) for v in ref], rtol=0, atol=1e-15)
    assert column_means(build_dataset([[3, 1, 2]])).tolist() == [3.0, 1.0, 2.0]


def test_column_means_sum():
    ds = random_dataset(np.random.default_rng(2), 40, 7, pool=10)
    mu = column_means(ds)
    assert mu.sum() == pytest.approx(28.0)
    assert np.all((mu >= 1) & (mu <= 7))


def test_rank_of_means_examples():
    assert rank_of_means([1, 2, 10 / 3, 11 / 3]).values == (1, 2, 3, 4)
    assert rank_of_means([1.5, 1.5]).values == (1, 2)
    assert rank_of_means([3, 2, 1]).values == (3, 2, 1)
    assert rank_of_means([2.0, 1.0, 2.0, 1.0]).values == (3, 1, 4, 2)


def test_optimal_centroid_examples():
    y, v = optimal_centroid(build_dataset([[1, 2], [2, 1]]))
    assert y.values == (1, 2) and v == 2
    y, v = optimal_centroid(build_dataset([[2, 3, 1]]))
    assert y.values == (2, 3, 1) and v == 0
    ds = from_entries([([1, 2, 3, 4], 2), ([1, 2, 4, 3], 1)])
    y, v = optimal_centroid(ds)
    assert (y.values, v) == ((1, 2, 3, 4), 2)
    assert brute_force_centroid(ds) == (y, v)


def test_brute_force_examples():
    y, v = brute_force_centroid(build_dataset([[1, 2], [2, 1]]))
    assert v == 2 and y.values == (1, 2)  # lexicographic tie-break
    assert brute_force_centroid(build_dataset([[4, 1, 3, 2]]))[1] == 0
    with pytest.raises(TooLargeError):
        brute_force_centroid(build_dataset([list(range(1, 10))]))


@pytest.mark.parametrize("seed", range(50))
def test_closed_form_matches_brute_force_m5(seed):
    rng = np.random.default_rng(seed)
    ds = random_dataset(rng, int(rng.integers(1, 30)), 5, pool=int(rng.integers(1, 12)))
    assert optimal_centroid(ds)[1] == brute_force_centroid(ds)[1]


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 7), st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_closed_form_matches_brute_force_property(m, n, seed):
    rng = np.random.default_rng(seed)
    ds = random_dataset(rng, n, m, pool=max(1, n // 2))
    assert optimal_centroid(ds)[1] == brute_force_centroid(ds)[1]


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_rank_of_means_maximises_dot_product(m):
    # any strictly positive x: its own rank vector maximises <x, c>
    rng = np.random.default_rng(m)
    P = np.array(list(permutations(range(1, m + 1))))
    for _ in range(30):
        x = rng.random(m) + 1e-3
        if rng.random() < 0.3:
            x[1] = x[0]  # include ties
        best = (P @ x).max()
        c = np.array(rank_of_means(x).values)
        assert c @ x == pytest.approx(best, rel=1e-12)


def test_tie_orderings_share_objective():
    # columns 0/1 and 2/3 have equal means
    ds = build_dataset([[1, 2, 3, 4], [2, 1, 4, 3], [1, 2, 4, 3], [2, 1, 3, 4]])
    mu = column_means(ds)
    assert mu[0] == mu[1] and mu[2] == mu[3]
    costs = set()
    for a in ([1, 2], [2, 1]):
        for b in ([3, 4], [4, 3]):
            y = np.array(a + b)
            costs.add(int(((ds.rankings - y) ** 2).sum(axis=1) @ ds.counts))
    assert costs == {optimal_centroid(ds)[1]}


@given(st.permutations(list(range(1, 8))))
def test_idempotent(values):
    y, v = optimal_centroid(build_dataset([values]))
    assert list(y.values) == list(values) and v == 0


def test_centroids_for_labels_matches_per_cluster():
    rng = np.random.default_rng(5)
    ds = random_dataset(rng, 200, 6, pool=40)
    labels = rng.integers(0, 4, ds.n_distinct)
    C = centroids_for_labels(ds.rankings, ds.counts, labels, 4)
    for c in range(4):
        idx = np.flatnonzero(labels == c)
        assert list(C[c]) == list(optimal_centroid(ds.subset(idx))[0].values)


def test_centroids_for_labels_empty_cluster_is_identity():
    ds = build_dataset([[2, 1, 3]])
    C = centroids_for_labels(ds.rankings, ds.counts, np.array([0]), 2)
    assert C.tolist() == [[2, 1, 3], [1, 2, 3]]
