"""Immutable weighted bipartite graph and the queries the recommender consumes.

Node identifiers are opaque strings taken verbatim from the dataset. The same
string may appear on both sides of the graph and names two distinct nodes.
Internally both sides are remapped to dense integer indices in sorted-key
order so the hot kernels can work on CSR arrays; the remap never leaks
through the public interface.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import (
    DuplicateEdgeError,
    EmptyGraphError,
    SameNodeError,
    UnknownNodeError,
    WeightOutOfRangeError,
)


class RatingEdge(NamedTuple):
    """One (bottom, top, weight) observation.

    The timestamp is carried through parsing and splitting but is never used
    by the algorithm itself.
    """

    bottom: str
    top: str
    weight: float
    timestamp: int | None = None


@dataclass(frozen=True)
class DegreeStats:
    """Edge and node counts plus the two mean degrees.

    ``bottom_mean_degree`` is the average number of edges per bottom node and
    ``top_mean_degree`` the average per top node. Both are the same edge
    count divided by different node counts, so
    ``bottom_mean_degree * num_bottoms == top_mean_degree * num_tops ==
    num_edges`` up to the single final division.
    """

    num_bottoms: int
    num_tops: int
    num_edges: int
    bottom_mean_degree: float
    top_mean_degree: float


class BipartiteGraph:
    """Weighted bipartite adjacency store, immutable after construction.

    Both directions are indexed: bottom to top and top to bottom. Adjacency
    lists are sorted by neighbor key so every query iterates in a
    deterministic order. All queries are read-only and safe to call from
    many threads at once.
    """

    def __init__(
        self,
        edges: Iterable[RatingEdge | tuple],
        rating_range: tuple[float, float] = (1.0, 5.0),
    ):
        low, high = float(rating_range[0]), float(rating_range[1])
        if not low <= high:
            raise ValueError(f"invalid rating range [{low}, {high}]")
        self._rating_range = (low, high)

        by_pair: dict[tuple[str, str], RatingEdge] = {}
        for raw in edges:
            edge = raw if isinstance(raw, RatingEdge) else RatingEdge(*raw)
            if not edge.bottom or not edge.top:
                raise ValueError("node keys must be non-empty strings")
            weight = float(edge.weight)
            if not low <= weight <= high:
                raise WeightOutOfRangeError(weight, low, high)
            pair = (edge.bottom, edge.top)
            if pair in by_pair:
                raise DuplicateEdgeError(edge.bottom, edge.top)
            by_pair[pair] = RatingEdge(edge.bottom, edge.top, weight, edge.timestamp)

        self._edges: tuple[RatingEdge, ...] = tuple(by_pair.values())
        self._bottom_keys: tuple[str, ...] = tuple(sorted({b for b, _ in by_pair}))
        self._top_keys: tuple[str, ...] = tuple(sorted({t for _, t in by_pair}))
        self._bottom_index = {k: i for i, k in enumerate(self._bottom_keys)}
        self._top_index = {k: i for i, k in enumerate(self._top_keys)}

        m = len(self._edges)
        n_b = len(self._bottom_keys)
        n_t = len(self._top_keys)
        bi = np.fromiter((self._bottom_index[e.bottom] for e in self._edges), np.int64, m)
        ti = np.fromiter((self._top_index[e.top] for e in self._edges), np.int64, m)
        wt = np.fromiter((e.weight for e in self._edges), np.float64, m)

        order = np.lexsort((ti, bi))
        self._b_cols = ti[order]
        self._b_wts = wt[order]
        self._b_indptr = np.zeros(n_b + 1, np.int64)
        np.cumsum(np.bincount(bi, minlength=n_b), out=self._b_indptr[1:])

        order = np.lexsort((bi, ti))
        self._t_rows = bi[order]
        self._t_wts = wt[order]
        self._t_indptr = np.zeros(n_t + 1, np.int64)
        np.cumsum(np.bincount(ti, minlength=n_t), out=self._t_indptr[1:])

        if m > 0:
            counts = np.diff(self._t_indptr)
            self._top_avg = np.add.reduceat(self._t_wts, self._t_indptr[:-1]) / counts
            self._stats: DegreeStats | None = DegreeStats(
                num_bottoms=n_b,
                num_tops=n_t,
                num_edges=m,
                bottom_mean_degree=m / n_b,
                top_mean_degree=m / n_t,
            )
        else:
            self._top_avg = np.zeros(0, np.float64)
            self._stats = None

        for arr in (self._b_cols, self._b_wts, self._b_indptr,
                    self._t_rows, self._t_wts, self._t_indptr, self._top_avg):
            arr.flags.writeable = False

    # -- basic accessors ----------------------------------------------------

    @property
    def rating_range(self) -> tuple[float, float]:
        return self._rating_range

    @property
    def num_bottoms(self) -> int:
        return len(self._bottom_keys)

    @property
    def num_tops(self) -> int:
        return len(self._top_keys)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def bottom_keys(self) -> tuple[str, ...]:
        return self._bottom_keys

    @property
    def top_keys(self) -> tuple[str, ...]:
        return self._top_keys

    def edges(self) -> Iterator[RatingEdge]:
        return iter(self._edges)

    def has_bottom(self, key: str) -> bool:
        return key in self._bottom_index

    def has_top(self, key: str) -> bool:
        return key in self._top_index

    def has_edge(self, bottom: str, top: str) -> bool:
        b = self._bottom_index.get(bottom)
        t = self._top_index.get(top)
        if b is None or t is None:
            return False
        s, e = self._b_indptr[b], self._b_indptr[b + 1]
        pos = np.searchsorted(self._b_cols[s:e], t)
        return pos < e - s and self._b_cols[s + pos] == t

    def _bottom_idx(self, key: str) -> int:
        try:
            return self._bottom_index[key]
        except KeyError:
            raise UnknownNodeError("bottom", key) from None

    def _top_idx(self, key: str) -> int:
        try:
            return self._top_index[key]
        except KeyError:
            raise UnknownNodeError("top", key) from None

    # -- queries ------------------------------------------------------------

    def top_neighbors(self, bottom: str) -> list[tuple[str, float]]:
        """All (top, weight) pairs adjacent to ``bottom``, sorted by top key."""
        i = self._bottom_idx(bottom)
        s, e = self._b_indptr[i], self._b_indptr[i + 1]
        return [(self._top_keys[c], float(w))
                for c, w in zip(self._b_cols[s:e], self._b_wts[s:e])]

    def bottom_neighbors(self, top: str) -> list[tuple[str, float]]:
        """All (bottom, weight) pairs adjacent to ``top``, sorted by bottom key."""
        i = self._top_idx(top)
        s, e = self._t_indptr[i], self._t_indptr[i + 1]
        return [(self._bottom_keys[r], float(w))
                for r, w in zip(self._t_rows[s:e], self._t_wts[s:e])]

    def common_top_neighbors(self, bottom_a: str, bottom_b: str) -> set[str]:
        """Top nodes rated by both bottoms."""
        if bottom_a == bottom_b:
            raise SameNodeError(bottom_a)
        i = self._bottom_idx(bottom_a)
        j = self._bottom_idx(bottom_b)
        sa, ea = self._b_indptr[i], self._b_indptr[i + 1]
        sb, eb = self._b_indptr[j], self._b_indptr[j + 1]
        common = np.intersect1d(self._b_cols[sa:ea], self._b_cols[sb:eb],
                                assume_unique=True)
        return {self._top_keys[c] for c in common}

    def degree_stats(self) -> DegreeStats:
        """Counts and mean degrees; raises :class:`EmptyGraphError` on an empty graph."""
        if self._stats is None:
            raise EmptyGraphError()
        return self._stats

    def item_average(self, top: str) -> float:
        """Arithmetic mean of all weights on the edges of ``top``."""
        return float(self._top_avg[self._top_idx(top)])


def build_graph(
    edges: Iterable[RatingEdge | tuple],
    rating_range: tuple[float, float] = (1.0, 5.0),
) -> BipartiteGraph:
    """Build an immutable :class:`BipartiteGraph` from an edge list."""
    return BipartiteGraph(edges, rating_range)
