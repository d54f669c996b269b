"""Link recommendation for weighted bipartite rating graphs.

Screens candidate (bottom, top) pairs for sufficient common-neighbor
evidence, predicts edge weights as similarity-weighted means of neighboring
ratings, and evaluates the whole pipeline on a seeded train/test split.
"""
from .backends import backend_name, get_backend
from .datasets import (
    DatasetFormat,
    SplitConfig,
    SplitResult,
    parse_dataset,
    shuffled_indices,
    split_edges,
    subsample_edges,
    write_canonical_tsv,
)
from .errors import (
    BadBinWidthError,
    BiprecError,
    DuplicateEdgeError,
    EdgeAlreadyExistsError,
    EmptyGraphError,
    InsufficientDataError,
    NoCommonNeighborsError,
    NoConfidenceError,
    NonPositiveAverageError,
    ParseError,
    SameNodeError,
    TooFewEdgesError,
    UnknownNodeError,
    WeightOutOfRangeError,
    ZeroActualError,
)
from .evaluate import (
    EvalOutcome,
    EvalRecord,
    EvalSummary,
    error_histogram,
    evaluate,
    percent_error,
    summary_to_json,
    write_histogram_csv,
    write_records_csv,
    write_summary_json,
)
from .graph import BipartiteGraph, DegreeStats, RatingEdge, build_graph
from .recommend import (
    GUARD_PER_PAIR,
    GUARD_TOTAL,
    Prediction,
    RecommenderConfig,
    SimilarityScore,
    SufficiencyReport,
    assess_sufficiency,
    combine_ratings,
    deviation_similarity,
    pair_similarity,
    predict_weight,
    recommend_for,
    sufficiency_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "BadBinWidthError",
    "BipartiteGraph",
    "BiprecError",
    "DatasetFormat",
    "DegreeStats",
    "DuplicateEdgeError",
    "EdgeAlreadyExistsError",
    "EmptyGraphError",
    "EvalOutcome",
    "EvalRecord",
    "EvalSummary",
    "GUARD_PER_PAIR",
    "GUARD_TOTAL",
    "InsufficientDataError",
    "NoCommonNeighborsError",
    "NoConfidenceError",
    "NonPositiveAverageError",
    "ParseError",
    "Prediction",
    "RatingEdge",
    "RecommenderConfig",
    "SameNodeError",
    "SimilarityScore",
    "SplitConfig",
    "SplitResult",
    "SufficiencyReport",
    "TooFewEdgesError",
    "UnknownNodeError",
    "WeightOutOfRangeError",
    "ZeroActualError",
    "assess_sufficiency",
    "backend_name",
    "build_graph",
    "combine_ratings",
    "deviation_similarity",
    "error_histogram",
    "evaluate",
    "get_backend",
    "pair_similarity",
    "parse_dataset",
    "percent_error",
    "predict_weight",
    "recommend_for",
    "shuffled_indices",
    "split_edges",
    "subsample_edges",
    "sufficiency_threshold",
    "summary_to_json",
    "write_canonical_tsv",
    "write_histogram_csv",
    "write_records_csv",
    "write_summary_json",
]
