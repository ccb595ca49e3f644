import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from vcramsey.core import Graph, SetSystem


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def graph_from_code(n, code):
    """Graph whose edges are the pairs selected by the bits of ``code``."""
    pairs = list(itertools.combinations(range(n), 2))
    return Graph.from_edges(n, [pairs[i] for i in range(len(pairs)) if code >> i & 1])


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    code = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return graph_from_code(n, code)


@st.composite
def set_systems(draw, max_universe=8, max_sets=12):
    u = draw(st.integers(1, max_universe))
    rows = draw(st.lists(st.integers(0, (1 << u) - 1), min_size=1, max_size=max_sets))
    return SetSystem.from_bitsets(u, rows)


@pytest.fixture
def c5():
    return cycle(5)


def brute_edge_count(g, parts):
    return sum(
        1 for t in itertools.product(*[list(p) for p in parts]) if g.has_edge(*t)
    )


def random_matrix(n, p, gen):
    a = np.triu(gen.random((n, n)) < p, 1)
    return a | a.T


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split("_")[2])):
        number = name.split("_")[2]
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {number}: {_criteria[name]}  {label}")
