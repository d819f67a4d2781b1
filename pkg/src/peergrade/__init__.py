"""Ordinal peer grading simulations: bundle graphs, noisy graders, aggregation."""

from .aggregate import ScoreTable, borda, borda_scores, mc4, mc4_transition, rsd
from .bundles import (
    Assignment,
    BundleGraph,
    assign,
    dump_graph,
    girth6_copies,
    girth6_graph,
    girth_at_least_6,
    is_order_revealing,
    kkk_copies,
    load_graph,
    overlap_energy,
    overlap_index,
    random_k_regular,
    shared_bundle_count,
)
from .core import (
    GroundTruth,
    PartialRanking,
    Profile,
    Ranking,
    count_inversions,
    recovered_fraction,
)
from .harness import (
    ExperimentConfig,
    ResultRow,
    preset,
    read_rows,
    run_experiments,
    run_trial,
    summarize,
    write_rows,
)
from .noise import (
    InfeasibleSamplingError,
    QualityProfile,
    noisy_partial_ranking,
    sample_qualities,
)
from .rng import hash64, substream
from .theory import (
    OverlapReport,
    PairStats,
    check_overlap_bounds,
    expected_score_diff,
    pair_stats,
    recovery_lower_bound,
    simulate_score_gap,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BundleGraph",
    "ExperimentConfig",
    "GroundTruth",
    "InfeasibleSamplingError",
    "OverlapReport",
    "PairStats",
    "PartialRanking",
    "Profile",
    "QualityProfile",
    "Ranking",
    "ResultRow",
    "ScoreTable",
    "assign",
    "borda",
    "borda_scores",
    "check_overlap_bounds",
    "count_inversions",
    "dump_graph",
    "expected_score_diff",
    "girth6_copies",
    "girth6_graph",
    "girth_at_least_6",
    "hash64",
    "is_order_revealing",
    "kkk_copies",
    "load_graph",
    "mc4",
    "mc4_transition",
    "noisy_partial_ranking",
    "overlap_energy",
    "overlap_index",
    "pair_stats",
    "preset",
    "random_k_regular",
    "read_rows",
    "recovered_fraction",
    "recovery_lower_bound",
    "rsd",
    "run_experiments",
    "run_trial",
    "sample_qualities",
    "shared_bundle_count",
    "simulate_score_gap",
    "substream",
    "summarize",
    "write_rows",
]
