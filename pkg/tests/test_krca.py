import json
import math

import numpy as np
import pytest

from rankclust.assignment import assign_es
from rankclust.core import build_dataset, make_solution
from rankclust.kmc import InfeasibleKError, kmc_objective, lloyd
from rankclust.krca import KrcaConfig, empty_cluster_repair, krca, relative_improvement
from rankclust.theory import exact_krc_oracle

from conftest import random_dataset

FOUR = [[1, 2, 3, 4], [2, 1, 3, 4], [3, 4, 1, 2], [4, 3, 1, 2]]


def test_config_validation():
    for bad in (dict(k=0), dict(k=2, epsilon=-1), dict(k=2, tol=-1), dict(k=2, max_outer_iter=-1)):
        with pytest.raises(ValueError):
            KrcaConfig(**bad)
    c = KrcaConfig(k=3)
    assert (c.epsilon, c.bnb_threshold, c.tol, c.max_outer_iter) == (1e-6, 5, 1e-6, 1000)


def test_relative_improvement():
    assert relative_improvement(110, 100) == pytest.approx(10.0)
    assert relative_improvement(100, 100) == 0.0
    assert relative_improvement(0, 0) == 0.0
    assert math.isinf(relative_improvement(4, 0))


def test_two_point_k1():
    rep = krca(build_dataset([[1, 2], [2, 1]]), KrcaConfig(k=1))
    assert rep.final.objective == 2 and rep.iterations == 1


def test_four_vector_k2_reaches_optimum():
    ds = build_dataset(FOUR)
    v_star = exact_krc_oracle(ds, 2)[1]
    assert v_star == 4
    finals = [krca(ds, KrcaConfig(k=2, seed=s, epsilon=0)).final.objective for s in range(20)]
    # KRCA is local: a baseline with both seeds in one group stays there
    assert min(finals) == v_star
    assert finals.count(v_star) >= 15
    # seed 0: snapped baseline already optimal, so no improvement
    rep = krca(ds, KrcaConfig(k=2, seed=0, epsilon=0))
    assert rep.baseline.objective == 4 and rep.relative_improvement_pct == 0.0


def test_k_equals_distinct():
    ds = random_dataset(np.random.default_rng(0), 50, 4, pool=7)
    rep = krca(ds, KrcaConfig(k=ds.n_distinct))
    assert rep.final.objective == 0


def test_infeasible_k():
    with pytest.raises(InfeasibleKError):
        krca(build_dataset([[1, 2], [1, 2]]), KrcaConfig(k=2))


@pytest.mark.parametrize("seed", range(30))
def test_monotone_and_bounded(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(3, 8))
    k = int(rng.integers(2, 7))
    ds = random_dataset(rng, int(rng.integers(50, 800)), m, pool=int(rng.integers(k, 200)))
    rep = krca(ds, KrcaConfig(k=k, epsilon=0.0, seed=seed))
    h = np.array(rep.per_iteration_objectives)
    assert np.all(np.diff(h) <= 0)
    assert rep.final.objective == h.min() == h[-1]
    assert rep.final.objective <= rep.baseline.objective
    assert rep.relative_improvement_pct >= 0
    # final <= baseline <= 2 v_KMC(baseline clustering)
    assert rep.baseline.objective <= 2 * kmc_objective(ds, rep.baseline.labels, k) + 1e-9
    # even-integer descent bounds the number of strictly improving steps
    assert int(np.sum(np.diff(h) < 0)) <= rep.baseline.objective // 2
    assert rep.final.objective == make_solution(ds, rep.final.centroids, rep.final.labels).objective
    assert np.bincount(rep.final.labels, minlength=k).min() >= 1


def test_fixed_point_is_local_optimum():
    rng = np.random.default_rng(4)
    ds = random_dataset(rng, 600, 6, pool=120)
    rep = krca(ds, KrcaConfig(k=4, epsilon=0.0, seed=1))
    lab = assign_es(ds, rep.final.centroids)
    assert make_solution(ds, rep.final.centroids, lab).objective == rep.final.objective


def test_positive_eps_patience_and_best():
    rng = np.random.default_rng(8)
    ds = random_dataset(rng, 500, 5, pool=100)
    rep = krca(ds, KrcaConfig(k=4, epsilon=3.0, seed=0))
    h = rep.per_iteration_objectives
    assert rep.final.objective == min(h)
    assert rep.iterations <= 1000


def test_max_outer_iter_cap():
    ds = random_dataset(np.random.default_rng(2), 400, 5, pool=100)
    rep = krca(ds, KrcaConfig(k=5, epsilon=0.0, max_outer_iter=1))
    assert rep.iterations == 1 and len(rep.per_iteration_objectives) == 2
    rep = krca(ds, KrcaConfig(k=5, max_outer_iter=0))
    assert rep.iterations == 0 and rep.final is rep.baseline


def test_explicit_baseline_and_backends(backend):
    ds = random_dataset(np.random.default_rng(3), 300, 5, pool=80)
    a = krca(ds, KrcaConfig(k=3, epsilon=0.0, backend=backend))
    b = krca(ds, KrcaConfig(k=3, epsilon=0.0, backend=backend), baseline=a.baseline)
    assert a.per_iteration_objectives == b.per_iteration_objectives
    assert math.isnan(b.kmc_objective)


def test_deterministic():
    ds = random_dataset(np.random.default_rng(6), 500, 6, pool=100)
    a = krca(ds, KrcaConfig(k=4, seed=11))
    b = krca(ds, KrcaConfig(k=4, seed=11))
    assert np.array_equal(a.final.labels, b.final.labels)
    assert a.per_iteration_objectives == b.per_iteration_objectives


def test_report_json():
    ds = build_dataset(FOUR)
    rep = krca(ds, KrcaConfig(k=2))
    doc = json.loads(rep.to_json())
    assert set(doc) >= {
        "baseline",
        "final",
        "iterations",
        "per_iteration_objectives",
        "relative_improvement_pct",
        "wall_time",
    }
    assert doc["final"]["objective"] == rep.final.objective
    assert doc["final"]["centroids"] == rep.final.centroids.tolist()


def test_report_json_infinite_improvement():
    from rankclust.krca import KrcaReport

    ds = build_dataset([[1, 2], [2, 1]])
    base = make_solution(ds, [[1, 2], [1, 2]], [0, 1])
    fin = make_solution(ds, [[1, 2], [2, 1]], [0, 1])
    rep = KrcaReport(base, fin, 1, (2, 0), relative_improvement(2, 0), 0.0)
    assert json.loads(rep.to_json())["relative_improvement_pct"] == "inf"


def test_repair_moves_farthest():
    ds = build_dataset([[1, 2, 3], [1, 3, 2], [3, 2, 1]])
    C = [[1, 2, 3], [2, 1, 3]]
    lab = empty_cluster_repair([0, 0, 0], C, ds)
    assert lab.tolist() == [0, 0, 1]  # [3,2,1] is farthest from [1,2,3]


def test_repair_noop():
    ds = build_dataset([[1, 2], [2, 1]])
    assert empty_cluster_repair([0, 1], [[1, 2], [2, 1]], ds).tolist() == [0, 1]


def test_repair_duplicate_centroids():
    ds = build_dataset([[1, 2, 3], [2, 1, 3], [1, 3, 2]])
    C = [[1, 2, 3], [1, 2, 3], [1, 2, 3]]
    lab = assign_es(ds, C)
    assert lab.tolist() == [0, 0, 0]
    lab = empty_cluster_repair(lab, C, ds)
    assert np.bincount(lab, minlength=3).tolist() == [1, 1, 1]


def test_repair_never_empties_donor():
    # cluster 1 holds one far entry; cluster 2 is empty; donor must be cluster 0
    ds = build_dataset([[1, 2, 3, 4], [1, 2, 4, 3], [2, 1, 3, 4], [4, 3, 2, 1]])
    C = [[1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 3, 4]]
    lab = empty_cluster_repair([0, 0, 0, 1], C, ds)
    assert lab[3] == 1 and np.bincount(lab, minlength=3).min() == 1
