import pytest

from utils.cache import clear_cache
from utils.config import SolverConfig
from utils.hypergraph import Hypergraph


@pytest.fixture
def fast_cfg():
    return SolverConfig(starts=3, max_clique_starts=6)


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_cache()
    yield
    clear_cache()


@pytest.fixture
def level1_example():
    # {1,2,3,4,5} + {12,13} + {123,356}
    return Hypergraph.from_edges(6, [(1,), (2,), (3,), (4,), (5,), (1, 2), (1, 3), (1, 2, 3), (3, 5, 6)])


def edges(*words):
    """edges('12', '134') -> [(1, 2), (1, 3, 4)]"""
    return [tuple(int(c) for c in word) for word in words]
