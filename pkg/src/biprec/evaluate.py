"""Offline evaluation: screen every held-out edge, predict, aggregate errors.

Each test edge yields exactly one record. Screening and prediction read only
the training graph, so records are independent of each other and of test-set
membership.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .backends import apply_thread_cap, get_backend
from .datasets import SplitConfig, subsample_edges
from .errors import BadBinWidthError, EdgeAlreadyExistsError, ZeroActualError
from .graph import BipartiteGraph, RatingEdge
from .recommend import GUARD_PER_PAIR, RecommenderConfig, sufficiency_threshold


class EvalOutcome(str, Enum):
    PREDICTED = "predicted"
    INSUFFICIENT_DATA = "insufficient_data"
    NO_CONFIDENCE = "no_confidence"
    COLD_START = "cold_start"


_CODE_TO_OUTCOME = {
    0: EvalOutcome.PREDICTED,
    1: EvalOutcome.INSUFFICIENT_DATA,
    2: EvalOutcome.NO_CONFIDENCE,
    3: EvalOutcome.COLD_START,
}


@dataclass(frozen=True)
class EvalRecord:
    """One test edge's fate. predicted and percent_error are set only when
    the outcome is PREDICTED."""

    bottom: str
    top: str
    actual: float
    predicted: float | None
    percent_error: float | None
    outcome: EvalOutcome


@dataclass(frozen=True)
class EvalSummary:
    """Aggregates over the predicted records.

    ``coverage_defined`` is False only for an empty test set, where coverage
    is reported as 0 by convention. Both the mean and the median error are
    always reported; they are None when nothing was predicted.
    """

    n_test: int
    n_predicted: int
    coverage: float
    coverage_defined: bool
    mean_error: float | None
    median_error: float | None
    histogram: tuple[tuple[float, float, int], ...]
    config_echo: dict


def percent_error(predicted: float, actual: float) -> float:
    """100 * |predicted - actual| / actual; the actual must be positive."""
    if actual <= 0.0:
        raise ZeroActualError(actual)
    return 100.0 * abs(predicted - actual) / actual


def error_histogram(errors: Sequence[float], bin_width: float = 6.0,
                    ) -> list[tuple[float, float, int]]:
    """Contiguous half-open bins [0, w), [w, 2w), ... up to the max error."""
    if bin_width <= 0.0:
        raise BadBinWidthError(bin_width)
    if not errors:
        return []
    n_bins = int(max(errors) // bin_width) + 1
    counts = [0] * n_bins
    for err in errors:
        counts[int(err // bin_width)] += 1
    return [(i * bin_width, (i + 1) * bin_width, count)
            for i, count in enumerate(counts)]


def evaluate(graph: BipartiteGraph, test_edges: Iterable[RatingEdge | tuple],
             config: RecommenderConfig = RecommenderConfig(), *,
             bin_width: float = 6.0, max_test_edges: int | None = None,
             sample_seed: int = 0, split_config: SplitConfig | None = None,
             ) -> tuple[list[EvalRecord], EvalSummary]:
    """Screen and predict every test edge against the training graph.

    Per-edge failures become outcomes, never exceptions: an unknown top or a
    failed screen is insufficient data, an unknown bottom is a cold start,
    and a contributor set below the similarity floor is no confidence. A test
    edge that is already in the training graph is a protocol violation
    (leakage) and raises :class:`EdgeAlreadyExistsError`.

    ``max_test_edges`` caps the test set by seeded uniform subsampling
    (recorded in the summary's config echo). ``split_config``, when given,
    is echoed alongside the recommender config for provenance.
    """
    test = [e if isinstance(e, RatingEdge) else RatingEdge(*e)
            for e in test_edges]
    if max_test_edges is not None and len(test) > max_test_edges:
        test = subsample_edges(test, max_test_edges, sample_seed)

    stats = graph.degree_stats()
    threshold = sufficiency_threshold(stats, config)

    n = len(test)
    pair_b = np.fromiter((graph._bottom_index.get(e.bottom, -1) for e in test),
                         np.int64, n)
    pair_t = np.fromiter((graph._top_index.get(e.top, -1) for e in test),
                         np.int64, n)
    for edge in test:
        if graph.has_edge(edge.bottom, edge.top):
            raise EdgeAlreadyExistsError(edge.bottom, edge.top)

    backend = get_backend()
    apply_thread_cap()
    low, high = graph.rating_range
    codes, preds = backend.evaluate_pairs_csr(
        graph._b_indptr, graph._b_cols, graph._b_wts,
        graph._t_indptr, graph._t_rows, graph._t_wts, graph._top_avg,
        pair_b, pair_t, config.min_common_tops, threshold,
        stats.top_mean_degree, config.guard_scope == GUARD_PER_PAIR,
        config.similarity_floor, low, high)

    records: list[EvalRecord] = []
    errors: list[float] = []
    for edge, code, pred in zip(test, codes, preds):
        outcome = _CODE_TO_OUTCOME[int(code)]
        if outcome is EvalOutcome.PREDICTED:
            err = percent_error(float(pred), edge.weight)
            records.append(EvalRecord(edge.bottom, edge.top, edge.weight,
                                      float(pred), err, outcome))
            errors.append(err)
        else:
            records.append(EvalRecord(edge.bottom, edge.top, edge.weight,
                                      None, None, outcome))

    summary = EvalSummary(
        n_test=n,
        n_predicted=len(errors),
        coverage=len(errors) / n if n else 0.0,
        coverage_defined=n > 0,
        mean_error=float(np.mean(errors)) if errors else None,
        median_error=float(np.median(errors)) if errors else None,
        histogram=tuple(error_histogram(errors, bin_width)),
        config_echo={
            "recommender": asdict(config),
            "split": asdict(split_config) if split_config is not None else None,
            "bin_width": bin_width,
            "max_test_edges": max_test_edges,
            "sample_seed": sample_seed,
        },
    )
    return records, summary


def _round6(value: float) -> float:
    # 6 significant digits, so serialized outputs are byte-stable.
    return float(f"{value:.6g}")


def _jsonable(value):
    if isinstance(value, float):
        return _round6(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def summary_to_json(summary: EvalSummary) -> str:
    return json.dumps(_jsonable(asdict(summary)), sort_keys=True, indent=2) + "\n"


def write_summary_json(summary: EvalSummary, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(summary_to_json(summary))


def write_histogram_csv(summary: EvalSummary, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bin_low", "bin_high", "count"])
        for low, high, count in summary.histogram:
            writer.writerow([f"{low:.6g}", f"{high:.6g}", count])


def write_records_csv(records: Iterable[EvalRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bottom", "top", "actual", "predicted",
                         "percent_error", "outcome"])
        for rec in records:
            writer.writerow([
                rec.bottom,
                rec.top,
                f"{rec.actual:.6g}",
                "" if rec.predicted is None else f"{rec.predicted:.6g}",
                "" if rec.percent_error is None else f"{rec.percent_error:.6g}",
                rec.outcome.value,
            ])
