import math
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import strategies as st

from qaoa_phaseops.graph import Graph

DATA = Path(__file__).parent / "data"

EIGHT_EDGES = [(0, 3), (0, 6), (0, 7), (1, 4), (1, 7), (2, 5), (2, 7), (3, 6), (4, 7), (5, 7)]
EIGHT_MATCHING = [(0, 7), (1, 4), (2, 5), (3, 6)]

# filled by the acceptance tests, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def eight() -> Graph:
    return Graph(8, EIGHT_EDGES)


@pytest.fixture
def eight_matching() -> Graph:
    return Graph(8, EIGHT_MATCHING)


def leaf_cycle(n: int) -> Graph:
    """Cycle through the leaves 0..n-2 of a star whose center is n-1."""
    leaves = n - 1
    if leaves < 3:
        return Graph(n, [(0, 1)] if leaves == 2 else [])
    return Graph(n, [(i, (i + 1) % leaves) for i in range(leaves)])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@st.composite
def graphs(draw, min_n=1, max_n=8, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph(n, [e for e, keep in zip(pairs, mask) if keep])
    if connected:
        # join components along a path so the result is connected
        comps = list(nx.connected_components(to_nx(g)))
        extra = [(min(a), min(b)) for a, b in zip(comps, comps[1:])]
        g = Graph(n, list(g.edges) + extra)
    return g


angles = st.tuples(st.floats(0, 2 * math.pi), st.floats(0, math.pi))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
