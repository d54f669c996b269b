"""Dataset parsing, canonical serialization, and the seeded train/test split."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ParseError, TooFewEdgesError, WeightOutOfRangeError
from .graph import RatingEdge


class DatasetFormat(str, Enum):
    """Supported input line grammars.

    MOVIELENS: ``user<TAB>item<TAB>rating<TAB>timestamp``, four integer
    fields, no header.
    EPINIONS: ``user item rating`` split on runs of spaces or tabs, extra
    trailing fields ignored, lines starting with ``#`` skipped.
    CANONICAL_TSV: ``bottom<TAB>top<TAB>rating[<TAB>timestamp]``, UTF-8, no
    header; this tool's own interchange format.
    """

    MOVIELENS = "movielens"
    EPINIONS = "epinions"
    CANONICAL_TSV = "tsv"


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")


@dataclass(frozen=True)
class SplitResult:
    train: list[RatingEdge]
    test: list[RatingEdge]


def _parse_int(text: str, line_no: int, field: str, path: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(line_no, f"non-integer {field} field {text!r}", path) from None


def _parse_rating(text: str, line_no: int, path: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(line_no, f"non-numeric rating {text!r}", path) from None
    if not math.isfinite(value):
        raise ParseError(line_no, f"non-finite rating {text!r}", path)
    return value


def parse_dataset(path: str | os.PathLike, fmt: DatasetFormat | str,
                  rating_range: tuple[float, float] = (1.0, 5.0)) -> list[RatingEdge]:
    """Parse a rating file into a list of edges.

    Blank lines are skipped. When the same (bottom, top) pair occurs more
    than once the last occurrence wins, keeping the position of the first,
    so re-ratings supersede earlier ones and the output never contains
    duplicate pairs.
    """
    fmt = DatasetFormat(fmt)
    path = os.fspath(path)
    low, high = rating_range
    by_pair: dict[tuple[str, str], RatingEdge] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue

            if fmt is DatasetFormat.MOVIELENS:
                parts = line.split("\t")
                if len(parts) != 4:
                    raise ParseError(line_no,
                                     f"expected 4 tab-separated fields, got {len(parts)}",
                                     path)
                for field, text in zip(("user", "item", "rating", "timestamp"), parts):
                    _parse_int(text, line_no, field, path)
                edge = RatingEdge(parts[0], parts[1], float(int(parts[2])), int(parts[3]))
            elif fmt is DatasetFormat.EPINIONS:
                if line.lstrip().startswith("#"):
                    continue
                parts = line.split()
                if len(parts) < 3:
                    raise ParseError(line_no,
                                     f"expected at least 3 whitespace-separated fields, got {len(parts)}",
                                     path)
                edge = RatingEdge(parts[0], parts[1],
                                  _parse_rating(parts[2], line_no, path), None)
            else:
                parts = line.split("\t")
                if len(parts) not in (3, 4):
                    raise ParseError(line_no,
                                     f"expected 3 or 4 tab-separated fields, got {len(parts)}",
                                     path)
                timestamp = _parse_int(parts[3], line_no, "timestamp", path) if len(parts) == 4 else None
                edge = RatingEdge(parts[0], parts[1],
                                  _parse_rating(parts[2], line_no, path), timestamp)

            if not edge.bottom or not edge.top:
                raise ParseError(line_no, "empty node key", path)
            if not low <= edge.weight <= high:
                raise WeightOutOfRangeError(edge.weight, low, high, line_no)
            by_pair[(edge.bottom, edge.top)] = edge
    return list(by_pair.values())


def write_canonical_tsv(edges: Iterable[RatingEdge], path: str | os.PathLike) -> None:
    """Serialize edges in the canonical TSV grammar (round-trips exactly)."""
    with open(path, "w", encoding="utf-8") as handle:
        for edge in edges:
            if any("\t" in key or "\n" in key or "\r" in key
                   for key in (edge.bottom, edge.top)):
                raise ValueError(f"node key not representable in TSV: ({edge.bottom!r}, {edge.top!r})")
            line = f"{edge.bottom}\t{edge.top}\t{edge.weight!r}"
            if edge.timestamp is not None:
                line += f"\t{edge.timestamp}"
            handle.write(line + "\n")


_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> tuple[int, int]:
    """One step of the splitmix64 generator: (output, next state)."""
    state = (state + _SPLITMIX_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def shuffled_indices(count: int, seed: int) -> list[int]:
    """Deterministic permutation of range(count).

    Fisher-Yates driven by splitmix64 seeded with ``seed``. Bounded draws
    use rejection sampling (a 64-bit draw v is accepted when
    v < 2**64 - 2**64 % m, then reduced as v % m) so the permutation is
    unbiased. Both algorithms are fixed and platform-independent, so a given
    (count, seed) pair yields the same permutation everywhere, independent
    of any runtime's random module.
    """
    indices = list(range(count))
    state = seed & _MASK64
    for i in range(count - 1, 0, -1):
        m = i + 1
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            value, state = _splitmix64(state)
            if value < limit:
                break
        j = value % m
        indices[i], indices[j] = indices[j], indices[i]
    return indices


def split_edges(edges: Sequence[RatingEdge], config: SplitConfig = SplitConfig()) -> SplitResult:
    """Shuffle edges with the seeded permutation and cut train/test.

    The train set is the first round(train_fraction * n) edges of the
    shuffled order (round-half-even); the rest are test. A fixed (edge list,
    config) pair always produces the same partition.
    """
    edges = list(edges)
    if len(edges) < 2:
        raise TooFewEdgesError(len(edges))
    order = shuffled_indices(len(edges), config.seed)
    n_train = round(config.train_fraction * len(edges))
    return SplitResult(
        train=[edges[i] for i in order[:n_train]],
        test=[edges[i] for i in order[n_train:]],
    )


def subsample_edges(edges: Sequence[RatingEdge], count: int, seed: int) -> list[RatingEdge]:
    """Uniform, seeded subsample of ``count`` edges, keeping input order.

    Uses the same fixed permutation machinery as :func:`split_edges`.
    Returns the input unchanged when it is already small enough.
    """
    if count < 0:
        raise ValueError(f"subsample size must be non-negative, got {count}")
    edges = list(edges)
    if count >= len(edges):
        return edges
    order = shuffled_indices(len(edges), seed)
    return [edges[i] for i in sorted(order[:count])]
