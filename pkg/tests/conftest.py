"""Shared fixtures: the small frozen corpus plus the large clique ring."""

import numpy as np
import pytest
from hypothesis import settings

from localcluster.synth import (
    complete_graph,
    cycle_graph,
    dumbbell_graph,
    path_graph,
    ring_of_cliques,
)

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")

_acceptance_lines: list[str] = []


@pytest.fixture
def criterion_report():
    """Records an acceptance test's one-line summary for the final report.

    Captured stdout from passing tests never reaches the terminal, so the
    lines are replayed by pytest_terminal_summary below; the print keeps
    them visible inline under -s as well.
    """

    def record(line: str) -> None:
        _acceptance_lines.append(line)
        print("\n" + line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.line(line)


@pytest.fixture
def dumbbell():
    """Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3."""
    return dumbbell_graph()


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture(scope="session")
def ring20():
    """20 cliques of 10: each clique has volume 92, boundary cut 2."""
    return ring_of_cliques(20, 10)


@pytest.fixture(scope="session")
def big_ring():
    """The 10^5-node locality stress graph: 10,000 cliques of 10."""
    return ring_of_cliques(10_000, 10)


def seeded_subset(rng: np.random.Generator, n: int, size: int) -> list[int]:
    return sorted(int(v) for v in rng.choice(n, size=size, replace=False))
