import pytest

from dpds.graph import Graph
from dpds.results import PrivacyParams


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def path4():
    return Graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star4():
    # K_{1,3} with center 0
    return Graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def k4_minus_edge():
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


@pytest.fixture
def params():
    return PrivacyParams(2.0, 1e-6)


def recount_degrees(graph: Graph, alive) -> dict:
    """Fresh degree recount inside ``alive``, independent of PeelState."""
    alive = set(alive)
    return {
        v: sum(1 for u in graph.neighbors(v) if int(u) in alive) for v in alive
    }
