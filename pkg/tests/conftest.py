import numpy as np
import pytest

from qaoa2.graph import Graph, parse_edge_list


@pytest.fixture
def ring4():
    return parse_edge_list("4 4\n1 2\n2 3\n3 4\n4 1")


@pytest.fixture
def wtriangle():
    return parse_edge_list("3 3\n1 2 1\n1 3 2\n2 3 3")


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def random_graph(rng, n, p=0.5, weights=(0, 6)):
    """Small integer-weighted G(n, p) graph for property tests."""
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    w = rng.integers(weights[0], weights[1], size=keep.sum())
    return Graph(n, iu[keep], ju[keep], w)


def random_spins(rng, n):
    return np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
