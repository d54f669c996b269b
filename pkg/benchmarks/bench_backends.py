#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Builds a seeded synthetic rating graph, evaluates the same held-out edges
under both backends, and reports wall times plus the observed agreement.
The first numba call includes JIT compilation, so a warmup run is timed
separately.

Usage:
    python benchmarks/bench_backends.py [--bottoms N] [--tops N] [--edges N]
                                        [--test-edges N] [--repeats N]
"""
from __future__ import annotations

import argparse
import os
import random
import time

from biprec import RatingEdge, SplitConfig, build_graph, evaluate, split_edges


def synthetic_edges(n_bottoms: int, n_tops: int, n_edges: int, seed: int = 0):
    rng = random.Random(seed)
    quality = [rng.uniform(1.6, 4.6) for _ in range(n_tops)]
    bias = [rng.gauss(0.0, 0.5) for _ in range(n_bottoms)]
    cells = rng.sample(range(n_bottoms * n_tops), n_edges)
    edges = []
    for cell in cells:
        b, t = divmod(cell, n_tops)
        rating = min(5, max(1, round(quality[t] + bias[b] + rng.gauss(0.0, 0.7))))
        edges.append(RatingEdge(f"u{b:05d}", f"m{t:05d}", float(rating)))
    return edges


def time_backend(name: str, graph, test_edges, repeats: int):
    os.environ["BIPREC_BACKEND"] = name
    start = time.perf_counter()
    records, summary = evaluate(graph, test_edges)
    warmup = time.perf_counter() - start

    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        evaluate(graph, test_edges)
        times.append(time.perf_counter() - start)
    return records, summary, warmup, min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bottoms", type=int, default=600)
    parser.add_argument("--tops", type=int, default=300)
    parser.add_argument("--edges", type=int, default=30_000)
    parser.add_argument("--test-edges", type=int, default=1_000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    edges = synthetic_edges(args.bottoms, args.tops, args.edges, args.seed)
    split = split_edges(edges, SplitConfig(seed=args.seed))
    graph = build_graph(split.train)
    test = split.test[:args.test_edges]
    print(f"graph: {graph.num_bottoms} bottoms, {graph.num_tops} tops, "
          f"{graph.num_edges} train edges; evaluating {len(test)} pairs, "
          f"best of {args.repeats}")

    results = {}
    for name in ("numba", "numpy"):
        records, summary, warmup, best = time_backend(name, graph, test, args.repeats)
        results[name] = (records, best)
        print(f"{name:>6}: warmup {warmup:8.3f} s   best {best:8.3f} s   "
              f"({best / len(test) * 1e6:8.1f} us/pair)   "
              f"predicted {summary.n_predicted}/{summary.n_test}")

    numba_records, numba_best = results["numba"]
    numpy_records, numpy_best = results["numpy"]
    mismatched = sum(1 for a, b in zip(numba_records, numpy_records)
                     if a.outcome != b.outcome)
    max_delta = max((abs(a.predicted - b.predicted)
                     for a, b in zip(numba_records, numpy_records)
                     if a.predicted is not None and b.predicted is not None),
                    default=0.0)
    print(f"agreement: {mismatched} outcome mismatches, "
          f"max |delta prediction| = {max_delta:.3e}")
    print(f"speedup: numba is {numpy_best / numba_best:.1f}x faster than numpy")


if __name__ == "__main__":
    main()
