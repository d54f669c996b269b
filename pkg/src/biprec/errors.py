"""Exception types raised by the biprec library."""
from __future__ import annotations


class BiprecError(Exception):
    """Base class for all library errors."""


class DuplicateEdgeError(BiprecError):
    """The same (bottom, top) pair was given twice when building a graph."""

    def __init__(self, bottom: str, top: str):
        self.bottom = bottom
        self.top = top
        super().__init__(f"duplicate edge ({bottom!r}, {top!r})")


class WeightOutOfRangeError(BiprecError):
    """An edge weight falls outside the declared rating range."""

    def __init__(self, weight: float, low: float, high: float, line_no: int | None = None):
        self.weight = weight
        self.low = low
        self.high = high
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"weight {weight} outside [{low}, {high}]{where}")


class UnknownNodeError(BiprecError):
    """A queried node key does not exist on the requested side."""

    def __init__(self, side: str, key: str):
        self.side = side
        self.key = key
        super().__init__(f"unknown {side} node {key!r}")


class SameNodeError(BiprecError):
    """A pairwise query was given the same node twice."""

    def __init__(self, key: str):
        self.key = key
        super().__init__(f"need two distinct nodes, got {key!r} twice")


class EmptyGraphError(BiprecError):
    """The operation needs at least one edge."""

    def __init__(self) -> None:
        super().__init__("graph has no edges")


class ParseError(BiprecError):
    """A dataset line could not be parsed."""

    def __init__(self, line_no: int, reason: str, path: str | None = None):
        self.line_no = line_no
        self.reason = reason
        self.path = path
        where = f"{path}:{line_no}" if path else f"line {line_no}"
        super().__init__(f"{where}: {reason}")


class TooFewEdgesError(BiprecError):
    """Splitting needs at least two edges."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"need at least 2 edges to split, got {count}")


class NoCommonNeighborsError(BiprecError):
    """Similarity is undefined for bottoms with no common top neighbor."""

    def __init__(self, bottom_a: str, bottom_b: str):
        self.bottom_a = bottom_a
        self.bottom_b = bottom_b
        super().__init__(f"{bottom_a!r} and {bottom_b!r} share no top neighbor")


class InsufficientDataError(BiprecError):
    """Prediction was requested for a pair that fails the sufficiency screen."""

    def __init__(self, bottom: str, top: str):
        self.bottom = bottom
        self.top = top
        super().__init__(f"pair ({bottom!r}, {top!r}) has insufficient data")


class NoConfidenceError(BiprecError):
    """Every candidate contributor fell at or below the similarity floor."""

    def __init__(self, bottom: str, top: str):
        self.bottom = bottom
        self.top = top
        super().__init__(f"no contributor passes the similarity floor for ({bottom!r}, {top!r})")


class EdgeAlreadyExistsError(BiprecError):
    """The candidate pair is already an edge of the graph."""

    def __init__(self, bottom: str, top: str):
        self.bottom = bottom
        self.top = top
        super().__init__(f"({bottom!r}, {top!r}) is already an edge")


class NonPositiveAverageError(BiprecError):
    """Deviation similarity needs a positive item average."""

    def __init__(self, average: float):
        self.average = average
        super().__init__(f"item average must be positive, got {average}")


class ZeroActualError(BiprecError):
    """Percent error is undefined for a non-positive actual rating."""

    def __init__(self, actual: float):
        self.actual = actual
        super().__init__(f"actual rating must be positive, got {actual}")


class BadBinWidthError(BiprecError):
    """Histogram bin width must be positive."""

    def __init__(self, width: float):
        self.width = width
        super().__init__(f"bin width must be positive, got {width}")
