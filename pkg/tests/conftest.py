from __future__ import annotations

import functools
import random
import time
from pathlib import Path

import pytest

from dlcospec.graph import Graph

DATA = Path(__file__).parent / "data"
G7 = DATA / "g7c.g6"
G8 = DATA / "g8c.g6"
G9 = DATA / "g9c.g6.gz"

# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    """Random spanning tree plus independent extra edges."""
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


@functools.cache
def timed_census(order: int):
    """(classes, seconds) for the complete census of connected graphs of one order, computed once."""
    from dlcospec.census import ENUMERATION_LIMIT, enumerate_connected, ingest_corpus, run_census

    start = time.perf_counter()
    if order <= ENUMERATION_LIMIT:
        classes = run_census(enumerate_connected(order))
    else:
        classes = run_census(ingest_corpus({8: G8, 9: G9}[order]))
    return classes, time.perf_counter() - start


@pytest.fixture(scope="session")
def census_7():
    return timed_census(7)[0]


@pytest.fixture(scope="session")
def census_8():
    return timed_census(8)[0]


@pytest.fixture(scope="session")
def census_9():
    return timed_census(9)[0]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
