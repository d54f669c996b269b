"""Two-step link recommendation over a weighted bipartite graph.

Step one screens a candidate (bottom, top) pair for sufficient data: among
the bottoms that rated the candidate top, enough must overlap with the
candidate bottom's history, and the raw amount of overlap must clear a
low-sample guard. Step two predicts the edge weight as a similarity-weighted
mean of those raters' ratings, where similarity compares how the two bottoms
deviate from each common item's average rating.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .backends import get_backend
from ._numpy_backend import _deviation_similarity
from .errors import (
    EdgeAlreadyExistsError,
    InsufficientDataError,
    NoCommonNeighborsError,
    NoConfidenceError,
    NonPositiveAverageError,
)
from .graph import BipartiteGraph, DegreeStats

GUARD_TOTAL = "total"
GUARD_PER_PAIR = "per_pair"


@dataclass(frozen=True)
class RecommenderConfig:
    """Tuning knobs for screening and prediction.

    The screening threshold is ``threshold_cap - threshold_constant / (x + y)``
    with x and y the two mean degrees; it can go negative on tiny graphs, in
    which case every overlap ratio passes. ``min_common_tops`` is how many
    common tops a rater must share with the candidate bottom to count as
    overlapping. ``guard_scope`` picks how the low-sample guard aggregates
    common-neighbor counts: ``total`` compares their sum against the mean top
    degree, ``per_pair`` requires every rater to reach it individually.
    """

    threshold_cap: float = 0.9
    threshold_constant: float = 4.0
    min_common_tops: int = 1
    similarity_floor: float = 0.0
    guard_scope: str = GUARD_TOTAL

    def __post_init__(self):
        if not 0.0 < self.threshold_cap <= 1.0:
            raise ValueError(f"threshold_cap must be in (0, 1], got {self.threshold_cap}")
        if self.threshold_constant <= 0.0:
            raise ValueError(f"threshold_constant must be positive, got {self.threshold_constant}")
        if self.min_common_tops < 1:
            raise ValueError(f"min_common_tops must be >= 1, got {self.min_common_tops}")
        if self.guard_scope not in (GUARD_TOTAL, GUARD_PER_PAIR):
            raise ValueError(f"guard_scope must be 'total' or 'per_pair', got {self.guard_scope!r}")


@dataclass(frozen=True)
class SufficiencyReport:
    """Everything behind one accept/reject screening decision.

    ``raters`` counts the bottoms adjacent to the candidate top (candidate
    excluded); ``overlapping`` counts those sharing at least
    ``min_common_tops`` tops with the candidate bottom; ``total_common`` sums
    the common-top counts over all raters. ``required_common`` echoes the
    low-sample guard level (the mean top degree).
    """

    bottom: str
    top: str
    raters: int
    overlapping: int
    ratio: float
    threshold: float
    total_common: int
    required_common: float
    sufficient: bool


@dataclass(frozen=True)
class SimilarityScore:
    other_bottom: str
    value: float
    common_count: int


@dataclass(frozen=True)
class Prediction:
    """A predicted edge weight plus the contributors it was averaged from.

    ``contributors`` holds (similarity, rating) pairs in sorted bottom-key
    order; ``value`` is their similarity-weighted mean rating, clamped to the
    graph's rating range.
    """

    bottom: str
    top: str
    value: float
    contributor_count: int
    contributors: tuple[tuple[SimilarityScore, float], ...]


def sufficiency_threshold(stats: DegreeStats,
                          config: RecommenderConfig = RecommenderConfig()) -> float:
    """Density-adaptive screening threshold for the overlap ratio."""
    return config.threshold_cap - config.threshold_constant / (
        stats.bottom_mean_degree + stats.top_mean_degree)


def deviation_similarity(dev_a: float, dev_b: float, average: float) -> float:
    """Score two rating deviations in [0, 1].

    The deviations are each rating minus the shared item's average rating
    (``average``, which must be positive). Closer deviations score higher;
    the score is halved when the deviations point in opposite directions,
    with zero treated as agreeing with either sign.
    """
    if average <= 0.0:
        raise NonPositiveAverageError(average)
    return _deviation_similarity(float(dev_a), float(dev_b), float(average))


def pair_similarity(graph: BipartiteGraph, bottom_a: str, bottom_b: str) -> SimilarityScore:
    """Mean deviation similarity of two bottoms over their common tops.

    Assumes a positive rating scale, so every item average is positive.
    """
    i = graph._bottom_idx(bottom_a)
    j = graph._bottom_idx(bottom_b)
    backend = get_backend()
    value, count = backend.pair_similarity_csr(
        graph._b_indptr, graph._b_cols, graph._b_wts, graph._top_avg, i, j)
    if count == 0:
        raise NoCommonNeighborsError(bottom_a, bottom_b)
    if not math.isfinite(value):
        # Only reachable when a common top's average rating is not positive.
        raise NonPositiveAverageError(0.0)
    return SimilarityScore(other_bottom=bottom_b, value=value, common_count=count)


def assess_sufficiency(graph: BipartiteGraph, bottom: str, top: str,
                       config: RecommenderConfig = RecommenderConfig()) -> SufficiencyReport:
    """Screen a candidate pair; the top must exist, the bottom may not.

    An unknown bottom is reported as insufficient rather than raised, so
    cold-start candidates screen out like any other data-poor pair.
    """
    t_idx = graph._top_idx(top)
    if graph.has_edge(bottom, top):
        raise EdgeAlreadyExistsError(bottom, top)
    b_idx = graph._bottom_index.get(bottom, -1)
    stats = graph.degree_stats()

    backend = get_backend()
    raters, overlapping, total, mn = backend.screen_csr(
        graph._b_indptr, graph._b_cols, graph._t_indptr, graph._t_rows,
        b_idx, t_idx, config.min_common_tops)

    ratio = overlapping / raters if raters else 0.0
    threshold = sufficiency_threshold(stats, config)
    required = stats.top_mean_degree
    if config.guard_scope == GUARD_PER_PAIR:
        guard_ok = raters > 0 and mn >= required
    else:
        guard_ok = total >= required
    return SufficiencyReport(
        bottom=bottom,
        top=top,
        raters=raters,
        overlapping=overlapping,
        ratio=ratio,
        threshold=threshold,
        total_common=total,
        required_common=required,
        sufficient=raters > 0 and ratio >= threshold and guard_ok,
    )


def combine_ratings(similarities, ratings) -> float:
    """Similarity-weighted mean of ratings: sum(s*r) / sum(s).

    Terms accumulate sequentially in list order. The similarity sum must be
    positive. A single contributor returns its rating exactly, with no float
    round trip through the quotient.
    """
    if len(similarities) != len(ratings) or not similarities:
        raise ValueError("need matching, non-empty similarity and rating lists")
    s_sum = 0.0
    sr_sum = 0.0
    for sim, rating in zip(similarities, ratings):
        s_sum += sim
        sr_sum += sim * rating
    if s_sum <= 0.0:
        raise ValueError("similarity weights must sum to a positive value")
    if len(ratings) == 1:
        return float(ratings[0])
    return sr_sum / s_sum


def predict_weight(graph: BipartiteGraph, bottom: str, top: str,
                   config: RecommenderConfig = RecommenderConfig()) -> Prediction:
    """Predict the weight of a screened candidate pair.

    Raises :class:`InsufficientDataError` when the pair fails screening and
    :class:`NoConfidenceError` when no rater clears both the common-top
    minimum and the similarity floor.
    """
    report = assess_sufficiency(graph, bottom, top, config)
    if not report.sufficient:
        raise InsufficientDataError(bottom, top)

    b_idx = graph._bottom_idx(bottom)
    backend = get_backend()
    contributors: list[tuple[SimilarityScore, float]] = []
    for other, rating in graph.bottom_neighbors(top):
        if other == bottom:
            continue
        value, count = backend.pair_similarity_csr(
            graph._b_indptr, graph._b_cols, graph._b_wts, graph._top_avg,
            b_idx, graph._bottom_index[other])
        if count >= config.min_common_tops and value > config.similarity_floor:
            contributors.append((SimilarityScore(other, value, count), rating))
    # A negative similarity floor can admit an all-zero contributor set;
    # that is still a no-confidence outcome, matching the batch evaluator.
    if not contributors or sum(s.value for s, _ in contributors) <= 0.0:
        raise NoConfidenceError(bottom, top)

    p = combine_ratings([s.value for s, _ in contributors],
                        [r for _, r in contributors])
    low, high = graph.rating_range
    p = min(max(p, low), high)
    return Prediction(
        bottom=bottom,
        top=top,
        value=p,
        contributor_count=len(contributors),
        contributors=tuple(contributors),
    )


def recommend_for(graph: BipartiteGraph, bottom: str,
                  config: RecommenderConfig = RecommenderConfig(),
                  top_k: int = 10) -> list[Prediction]:
    """Up to ``top_k`` predictions over all tops not adjacent to ``bottom``.

    Sorted by predicted weight descending, ties broken by top key ascending.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    b_idx = graph._bottom_idx(bottom)
    stats = graph.degree_stats()
    threshold = sufficiency_threshold(stats, config)
    required = stats.top_mean_degree
    per_pair = config.guard_scope == GUARD_PER_PAIR
    low, high = graph.rating_range

    backend = get_backend()
    rated = set(graph._b_cols[graph._b_indptr[b_idx]:graph._b_indptr[b_idx + 1]])
    scored: list[tuple[float, str]] = []
    for t_idx, top in enumerate(graph.top_keys):
        if t_idx in rated:
            continue
        raters, overlapping, total, mn = backend.screen_csr(
            graph._b_indptr, graph._b_cols, graph._t_indptr, graph._t_rows,
            b_idx, t_idx, config.min_common_tops)
        if raters == 0:
            continue
        guard_ok = (mn >= required) if per_pair else (total >= required)
        if overlapping / raters < threshold or not guard_ok:
            continue
        p, k = backend.predict_csr(
            graph._b_indptr, graph._b_cols, graph._b_wts,
            graph._t_indptr, graph._t_rows, graph._t_wts, graph._top_avg,
            b_idx, t_idx, config.min_common_tops, config.similarity_floor,
            low, high)
        if k > 0:
            scored.append((p, top))

    scored.sort(key=lambda item: (-item[0], item[1]))
    return [predict_weight(graph, bottom, top, config)
            for _, top in scored[:top_k]]
