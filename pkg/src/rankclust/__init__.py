"""Clustering of ranking vectors around ranking-vector centroids."""

from ._backend import DEFAULT as DEFAULT_BACKEND
from .assignment import BnbStats, CentroidBounds, assign_bnb, assign_es, auto_assign, node_bounds
from .centroid import brute_force_centroid, column_means, optimal_centroid, rank_of_means
from .core import (
    CountedDataset,
    EmptyDatasetError,
    InvalidRankingError,
    KrcSolution,
    Ranking,
    build_dataset,
    objective,
    read_rankings_csv,
    sq_dist,
    validate_ranking,
    write_rankings_csv,
)
from .generators import SwapClusterSpec, gen_swap_clustered, gen_tightness, gen_uniform, swap_walk
from .kmc import KmcSolution, kmeanspp_seed, lloyd, snap_to_krc
from .krca import KrcaConfig, KrcaReport, krca, relative_improvement
from .rng import StableRng

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BACKEND",
    "BnbStats",
    "CentroidBounds",
    "CountedDataset",
    "EmptyDatasetError",
    "InvalidRankingError",
    "KmcSolution",
    "KrcSolution",
    "KrcaConfig",
    "KrcaReport",
    "Ranking",
    "StableRng",
    "SwapClusterSpec",
    "assign_bnb",
    "assign_es",
    "auto_assign",
    "brute_force_centroid",
    "build_dataset",
    "column_means",
    "gen_swap_clustered",
    "gen_tightness",
    "gen_uniform",
    "kmeanspp_seed",
    "krca",
    "lloyd",
    "node_bounds",
    "objective",
    "optimal_centroid",
    "rank_of_means",
    "read_rankings_csv",
    "relative_improvement",
    "snap_to_krc",
    "sq_dist",
    "swap_walk",
    "validate_ranking",
    "write_rankings_csv",
]
