"""Evaluation harness tests: percent error, histogram, per-edge outcomes."""
from __future__ import annotations

import json
import random

import pytest

import oracle
from _synth import synthetic_edges
from biprec import (
    BadBinWidthError,
    EdgeAlreadyExistsError,
    EvalOutcome,
    RatingEdge,
    RecommenderConfig,
    SplitConfig,
    ZeroActualError,
    build_graph,
    error_histogram,
    evaluate,
    percent_error,
    split_edges,
    summary_to_json,
    write_histogram_csv,
    write_records_csv,
)


class TestPercentError:
    def test_exact_hit(self):
        assert percent_error(4.0, 4.0) == 0.0

    def test_underestimate(self):
        assert percent_error(4.0, 5.0) == pytest.approx(20.0)

    def test_large_on_low_actuals(self):
        # Predicting 4 against an actual 1 yields the 300% outlier scale.
        assert percent_error(4.0, 1.0) == 300.0

    def test_zero_actual_rejected(self):
        with pytest.raises(ZeroActualError):
            percent_error(4.0, 0.0)
        with pytest.raises(ZeroActualError):
            percent_error(4.0, -1.0)


class TestErrorHistogram:
    def test_basic_counting(self):
        assert error_histogram([5.0, 5.0, 15.0], 10.0) == [
            (0.0, 10.0, 2), (10.0, 20.0, 1)]

    def test_empty(self):
        assert error_histogram([], 10.0) == []

    def test_boundary_goes_to_upper_bin(self):
        assert error_histogram([10.0], 10.0) == [(0.0, 10.0, 0), (10.0, 20.0, 1)]

    def test_intermediate_empty_bins_present(self):
        assert error_histogram([5.0, 25.0], 10.0) == [
            (0.0, 10.0, 1), (10.0, 20.0, 0), (20.0, 30.0, 1)]

    def test_counts_sum_to_length(self):
        rng = random.Random(3)
        errors = [rng.uniform(0, 310) for _ in range(500)]
        bins = error_histogram(errors, 6.0)
        assert sum(count for _, _, count in bins) == len(errors)
        lows = [low for low, _, _ in bins]
        assert lows == [i * 6.0 for i in range(len(bins))]

    def test_bad_bin_width(self):
        with pytest.raises(BadBinWidthError):
            error_histogram([1.0], 0.0)
        with pytest.raises(BadBinWidthError):
            error_histogram([1.0], -2.0)


class TestEvaluateOutcomes:
    def test_cold_start_bottom(self, golden_graph):
        records, summary = evaluate(golden_graph, [("new_user", "t3", 4.0)])
        assert records[0].outcome is EvalOutcome.COLD_START
        assert records[0].predicted is None
        assert summary.n_predicted == 0

    def test_unknown_top_is_insufficient(self, golden_graph):
        records, _ = evaluate(golden_graph, [("b1", "unseen", 4.0)])
        assert records[0].outcome is EvalOutcome.INSUFFICIENT_DATA

    def test_empty_test_set(self, golden_graph):
        records, summary = evaluate(golden_graph, [])
        assert records == []
        assert summary.n_test == 0
        assert summary.coverage == 0.0
        assert not summary.coverage_defined
        assert summary.mean_error is None
        assert summary.median_error is None
        assert summary.histogram == ()

    def test_test_edge_in_training_graph_raises(self, golden_graph):
        with pytest.raises(EdgeAlreadyExistsError):
            evaluate(golden_graph, [("b1", "t1", 4.0)])

    def test_golden_trace(self, golden_graph):
        records, summary = evaluate(golden_graph, [("b1", "t3", 4.0)])
        record, = records
        assert record.outcome is EvalOutcome.PREDICTED
        assert record.predicted == 4.0588235294117645
        assert record.percent_error == 1.4705882352941124
        assert summary.n_test == 1
        assert summary.n_predicted == 1
        assert summary.coverage == 1.0
        assert summary.mean_error == 1.4705882352941124
        assert summary.median_error == 1.4705882352941124
        assert summary.histogram == ((0.0, 6.0, 1),)

    def test_every_test_edge_yields_one_record(self):
        edges = synthetic_edges(60, 30, 700, seed=2)
        split = split_edges(edges, SplitConfig(seed=5))
        graph = build_graph(split.train)
        records, summary = evaluate(graph, split.test)
        assert len(records) == len(split.test) == summary.n_test
        by_outcome = {}
        for rec in records:
            by_outcome[rec.outcome] = by_outcome.get(rec.outcome, 0) + 1
        assert sum(by_outcome.values()) == summary.n_test
        assert by_outcome.get(EvalOutcome.PREDICTED, 0) == summary.n_predicted
        for rec in records:
            assert (rec.predicted is not None) == (rec.outcome is EvalOutcome.PREDICTED)
            assert (rec.percent_error is not None) == (rec.outcome is EvalOutcome.PREDICTED)

    def test_records_in_input_order(self):
        edges = synthetic_edges(40, 20, 350, seed=9)
        split = split_edges(edges, SplitConfig(seed=1))
        graph = build_graph(split.train)
        records, _ = evaluate(graph, split.test)
        assert [(r.bottom, r.top) for r in records] == \
            [(e.bottom, e.top) for e in split.test]

    def test_deterministic(self):
        edges = synthetic_edges(50, 25, 500, seed=4)
        split = split_edges(edges, SplitConfig(seed=11))
        graph = build_graph(split.train)
        first = evaluate(graph, split.test)
        second = evaluate(graph, split.test)
        assert first == second

    def test_max_test_edges_subsamples(self):
        edges = synthetic_edges(50, 25, 500, seed=4)
        split = split_edges(edges, SplitConfig(seed=11))
        graph = build_graph(split.train)
        records, summary = evaluate(graph, split.test, max_test_edges=20,
                                    sample_seed=42)
        assert summary.n_test == 20
        assert len(records) == 20
        assert summary.config_echo["max_test_edges"] == 20
        assert summary.config_echo["sample_seed"] == 42
        # The subsample keeps test order, so records embed into the full run.
        full_records, _ = evaluate(graph, split.test)
        by_pair = {(r.bottom, r.top): r for r in full_records}
        for rec in records:
            assert by_pair[(rec.bottom, rec.top)] == rec

    def test_matches_oracle_pipeline(self, each_backend):
        rng = random.Random(23)
        from _synth import random_small_edges
        compared = 0
        for _ in range(80):
            train = random_small_edges(rng, max_side=6)
            if len(train) < 2:
                continue
            graph = build_graph(train)
            rated = {(b, t) for b, t, _ in train}
            probes = []
            for b in list(graph.bottom_keys) + ["ghost"]:
                for t in list(graph.top_keys) + ["phantom"]:
                    if (b, t) not in rated:
                        probes.append(RatingEdge(b, t, float(rng.randint(1, 5))))
            records, _ = evaluate(graph, probes)
            for rec in records:
                outcome, p = oracle.evaluate_pair(train, rec.bottom, rec.top)
                assert rec.outcome.value == outcome
                if p is None:
                    assert rec.predicted is None
                else:
                    assert rec.predicted == p
                compared += 1
        assert compared > 400


class TestNoLeakage:
    def test_removing_a_test_edge_changes_no_other_record(self):
        edges = synthetic_edges(40, 20, 400, seed=8)
        split = split_edges(edges, SplitConfig(seed=3))
        graph = build_graph(split.train)
        base_records, _ = evaluate(graph, split.test)
        base = {(r.bottom, r.top): r for r in base_records}
        rng = random.Random(0)
        for index in rng.sample(range(len(split.test)), 5):
            reduced = split.test[:index] + split.test[index + 1:]
            records, _ = evaluate(graph, reduced)
            for rec in records:
                assert base[(rec.bottom, rec.top)] == rec


class TestSerialization:
    def test_summary_json_shape(self, golden_graph):
        _, summary = evaluate(
            golden_graph, [("b1", "t3", 4.0)],
            split_config=SplitConfig(train_fraction=0.8, seed=42))
        payload = json.loads(summary_to_json(summary))
        assert set(payload) == {
            "n_test", "n_predicted", "coverage", "coverage_defined",
            "mean_error", "median_error", "histogram", "config_echo"}
        assert payload["n_test"] == 1
        assert payload["mean_error"] == 1.47059  # six significant digits
        assert payload["config_echo"]["split"] == {
            "train_fraction": 0.8, "seed": 42}
        assert payload["config_echo"]["recommender"]["threshold_cap"] == 0.9

    def test_summary_json_null_aggregates(self, golden_graph):
        _, summary = evaluate(golden_graph, [])
        payload = json.loads(summary_to_json(summary))
        assert payload["mean_error"] is None
        assert payload["median_error"] is None
        assert payload["coverage_defined"] is False

    def test_histogram_csv(self, golden_graph, tmp_path):
        _, summary = evaluate(golden_graph, [("b1", "t3", 4.0)])
        path = tmp_path / "hist.csv"
        write_histogram_csv(summary, path)
        assert path.read_text() == "bin_low,bin_high,count\n0,6,1\n"

    def test_records_csv(self, golden_graph, tmp_path):
        records, _ = evaluate(golden_graph,
                              [("b1", "t3", 4.0), ("ghost", "t1", 2.0)])
        path = tmp_path / "records.csv"
        write_records_csv(records, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "bottom,top,actual,predicted,percent_error,outcome"
        assert lines[1] == "b1,t3,4,4.05882,1.47059,predicted"
        assert lines[2] == "ghost,t1,2,,,cold_start"

    def test_aggregates_cover_only_predictions(self):
        edges = synthetic_edges(60, 30, 700, seed=2)
        split = split_edges(edges, SplitConfig(seed=5))
        graph = build_graph(split.train)
        records, summary = evaluate(graph, split.test)
        errors = [r.percent_error for r in records
                  if r.outcome is EvalOutcome.PREDICTED]
        assert summary.n_predicted == len(errors)
        assert summary.mean_error == pytest.approx(sum(errors) / len(errors))
        assert sum(c for _, _, c in summary.histogram) == len(errors)
