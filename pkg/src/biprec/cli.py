"""Command-line interface: stats, evaluate, predict, recommend.

All floating-point output is printed with 6 significant digits and every
command is a pure function of its input file and flags, so reruns produce
byte-identical files.
"""
from __future__ import annotations

import sys

import click

from .datasets import DatasetFormat, SplitConfig, parse_dataset, split_edges
from .errors import BiprecError, NoConfidenceError
from .evaluate import (
    evaluate,
    write_histogram_csv,
    write_records_csv,
    write_summary_json,
)
from .graph import build_graph
from .recommend import (
    RecommenderConfig,
    assess_sufficiency,
    predict_weight,
    recommend_for,
    sufficiency_threshold,
)

_FORMAT_CHOICE = click.Choice([f.value for f in DatasetFormat])


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _input_options(fn):
    fn = click.option("--format", "fmt", type=_FORMAT_CHOICE, default="tsv",
                      show_default=True, help="Input line grammar.")(fn)
    fn = click.option("--input", "input_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Rating file to read.")(fn)
    return fn


def _config_options(fn):
    fn = click.option("--guard-scope", type=click.Choice(["total", "per_pair"]),
                      default="total", show_default=True,
                      help="How the low-sample guard aggregates common-neighbor counts.")(fn)
    fn = click.option("--similarity-floor", type=float, default=0.0,
                      show_default=True,
                      help="Contributors must score strictly above this similarity.")(fn)
    fn = click.option("--min-common-tops", type=int, default=1, show_default=True,
                      help="Common tops a rater needs to count as overlapping.")(fn)
    fn = click.option("--threshold-constant", type=float, default=4.0,
                      show_default=True,
                      help="Constant subtracted in the screening threshold.")(fn)
    fn = click.option("--threshold-cap", type=float, default=0.9,
                      show_default=True,
                      help="Upper limit of the screening threshold.")(fn)
    return fn


def _make_config(threshold_cap, threshold_constant, min_common_tops,
                 similarity_floor, guard_scope) -> RecommenderConfig:
    return RecommenderConfig(
        threshold_cap=threshold_cap,
        threshold_constant=threshold_constant,
        min_common_tops=min_common_tops,
        similarity_floor=similarity_floor,
        guard_scope=guard_scope,
    )


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Link recommendation for weighted bipartite rating graphs."""


@main.command()
@_input_options
def stats(input_path, fmt):
    """Print node/edge counts, mean degrees, and the screening threshold."""
    try:
        graph = build_graph(parse_dataset(input_path, fmt))
        degree = graph.degree_stats()
    except (BiprecError, ValueError, OSError) as exc:
        _fail(exc)
    click.echo(f"bottoms: {degree.num_bottoms}")
    click.echo(f"tops: {degree.num_tops}")
    click.echo(f"edges: {degree.num_edges}")
    click.echo(f"bottom_mean_degree: {_fmt(degree.bottom_mean_degree)}")
    click.echo(f"top_mean_degree: {_fmt(degree.top_mean_degree)}")
    click.echo(f"threshold: {_fmt(sufficiency_threshold(degree))}")


@main.command("evaluate")
@_input_options
@_config_options
@click.option("--seed", type=int, default=42, show_default=True,
              help="Seed for the train/test split and any subsampling.")
@click.option("--split", "train_fraction", type=float, default=0.8,
              show_default=True, help="Fraction of edges used for training.")
@click.option("--max-test-edges", type=int, default=None,
              help="Cap the test set by seeded uniform subsampling.")
@click.option("--bin-width", type=float, default=6.0, show_default=True,
              help="Histogram bin width in percentage points.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default="summary.json", show_default=True,
              help="Where to write the summary JSON.")
@click.option("--hist", "hist_path", type=click.Path(dir_okay=False),
              default="histogram.csv", show_default=True,
              help="Where to write the histogram CSV.")
@click.option("--records", "records_path", type=click.Path(dir_okay=False),
              default=None, help="Optionally write per-edge records CSV here.")
def evaluate_cmd(input_path, fmt, seed, train_fraction, max_test_edges,
                 bin_width, out_path, hist_path, records_path, **config_kwargs):
    """Split the input, train on one part, and score predictions on the rest."""
    try:
        config = _make_config(**config_kwargs)
        split_config = SplitConfig(train_fraction=train_fraction, seed=seed)
        edges = parse_dataset(input_path, fmt)
        split = split_edges(edges, split_config)
        graph = build_graph(split.train)
        records, summary = evaluate(
            graph, split.test, config,
            bin_width=bin_width, max_test_edges=max_test_edges,
            sample_seed=seed, split_config=split_config)
        write_summary_json(summary, out_path)
        write_histogram_csv(summary, hist_path)
        if records_path is not None:
            write_records_csv(records, records_path)
    except (BiprecError, ValueError, OSError) as exc:
        _fail(exc)
    click.echo(f"n_test: {summary.n_test}")
    click.echo(f"n_predicted: {summary.n_predicted}")
    click.echo(f"coverage: {_fmt(summary.coverage)}")
    click.echo("mean_error: " + ("n/a" if summary.mean_error is None
                                 else _fmt(summary.mean_error)))
    click.echo("median_error: " + ("n/a" if summary.median_error is None
                                   else _fmt(summary.median_error)))


@main.command()
@_input_options
@_config_options
@click.argument("bottom")
@click.argument("top")
def predict(input_path, fmt, bottom, top, **config_kwargs):
    """Screen one candidate pair and predict its weight if sufficient.

    Exits 0 when a prediction is made and 2 when the pair screens out, so
    shell pipelines can tell algorithmic rejection from failure.
    """
    try:
        config = _make_config(**config_kwargs)
        graph = build_graph(parse_dataset(input_path, fmt))
        report = assess_sufficiency(graph, bottom, top, config)
    except (BiprecError, ValueError, OSError) as exc:
        _fail(exc)
    click.echo(f"bottom: {report.bottom}")
    click.echo(f"top: {report.top}")
    click.echo(f"raters: {report.raters}")
    click.echo(f"overlapping: {report.overlapping}")
    click.echo(f"ratio: {_fmt(report.ratio)}")
    click.echo(f"threshold: {_fmt(report.threshold)}")
    click.echo(f"total_common: {report.total_common}")
    click.echo(f"required_common: {_fmt(report.required_common)}")
    click.echo(f"sufficient: {'true' if report.sufficient else 'false'}")
    if not report.sufficient:
        sys.exit(2)
    try:
        prediction = predict_weight(graph, bottom, top, config)
    except NoConfidenceError:
        click.echo("no prediction: every contributor is at or below the similarity floor")
        sys.exit(2)
    click.echo(f"predicted: {_fmt(prediction.value)}")
    click.echo(f"contributors: {prediction.contributor_count}")
    for score, rating in prediction.contributors:
        click.echo(f"{score.other_bottom}\t{_fmt(score.value)}"
                   f"\t{score.common_count}\t{_fmt(rating)}")


@main.command()
@_input_options
@_config_options
@click.argument("bottom")
@click.option("--top-k", type=int, default=10, show_default=True,
              help="Maximum number of recommendations to print.")
def recommend(input_path, fmt, bottom, top_k, **config_kwargs):
    """Print up to --top-k predicted edges for a bottom node.

    One line per recommendation: rank, top key, predicted weight, separated
    by tabs, best first.
    """
    try:
        config = _make_config(**config_kwargs)
        graph = build_graph(parse_dataset(input_path, fmt))
        predictions = recommend_for(graph, bottom, config, top_k)
    except (BiprecError, ValueError, OSError) as exc:
        _fail(exc)
    for rank, prediction in enumerate(predictions, start=1):
        click.echo(f"{rank}\t{prediction.top}\t{_fmt(prediction.value)}")


if __name__ == "__main__":
    main()
