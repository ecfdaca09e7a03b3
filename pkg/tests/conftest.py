import random

import pytest

from amrtriples import parse_penman
from amrtriples.graph import AmrGraph
from amrtriples.random_graphs import random_graph

from samples import CHINA_PENMAN, NUTTERS_PENMAN


@pytest.fixture(scope="session")
def china() -> AmrGraph:
    return parse_penman(CHINA_PENMAN)


@pytest.fixture(scope="session")
def nutters() -> AmrGraph:
    return parse_penman(NUTTERS_PENMAN)


@pytest.fixture(scope="session")
def china_minus_edge(china) -> AmrGraph:
    return china.replace(edges=tuple(e for e in china.edges if (e.source, e.role) != ("h", "ARG3")))


def seeded_graphs(count: int, max_nodes: int = 12, base: int = 0):
    return [random_graph(random.Random(base + k), max_nodes=max_nodes) for k in range(count)]


def pytest_terminal_summary(terminalreporter):
    from acceptance import RESULTS, format_line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for result in RESULTS:
            terminalreporter.write_line(format_line(result))
