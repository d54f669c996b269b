"""Shared fixtures plus the acceptance-criteria reporting hook."""
from __future__ import annotations

import pytest

from biprec import RatingEdge, build_graph


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


class AcceptanceRecorder:
    def __init__(self, lines):
        self._lines = lines

    def check(self, criterion: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        self._lines.append(f"{status}  {criterion}  {detail}".rstrip())
        assert passed, f"{criterion}: {detail}"

    def skip(self, criterion: str, reason: str):
        self._lines.append(f"SKIP  {criterion}  {reason}")
        pytest.skip(reason)


@pytest.fixture
def acceptance(request):
    return AcceptanceRecorder(request.config._acceptance_lines)


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    monkeypatch.setenv("BIPREC_BACKEND", request.param)
    return request.param


GOLDEN_EDGES = [
    ("b1", "t1", 4.0),
    ("b1", "t2", 2.0),
    ("b2", "t1", 5.0),
    ("b2", "t2", 1.0),
    ("b2", "t3", 3.0),
    ("b3", "t2", 3.0),
    ("b3", "t3", 5.0),
]


@pytest.fixture
def golden_graph():
    """Six-node graph behind the locked walkthrough of the two algorithm steps."""
    return build_graph(GOLDEN_EDGES)


@pytest.fixture
def golden_edges():
    return [RatingEdge(b, t, w) for b, t, w in GOLDEN_EDGES]
