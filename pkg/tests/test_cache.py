import pytest
from cachetools import LRUCache

from utils import cache
from utils.cache import cache_size, get_optimum, get_oracle
from utils.hypergraph import complete
from utils.lagrangian import AlphaParams

ONE = AlphaParams()


def test_results_are_memoized(fast_cfg):
    k3 = complete((2,), 3)
    first = get_optimum(k3, ONE, fast_cfg)
    assert get_optimum(k3, ONE, fast_cfg) is first
    assert cache_size() == 1
    get_oracle(k3, ONE, fast_cfg)
    assert cache_size() == 2


def test_cache_is_bounded(monkeypatch, fast_cfg):
    monkeypatch.setattr(cache, '_solved', LRUCache(maxsize=2))
    k3, k4, k5 = (complete((2,), t) for t in (3, 4, 5))
    first = get_optimum(k3, ONE, fast_cfg)
    get_optimum(k4, ONE, fast_cfg)
    get_optimum(k5, ONE, fast_cfg)
    assert cache_size() == 2
    # k3 was evicted, so it is solved again
    again = get_optimum(k3, ONE, fast_cfg)
    assert again is not first
    assert again.value == pytest.approx(first.value, abs=1e-12)


def test_cross_check_keeps_the_optimizer_result(fast_cfg):
    k4 = complete((2,), 4)
    assert get_optimum(k4, ONE, fast_cfg, cross_check=True).value == pytest.approx(0.375, abs=1e-9)
    assert cache_size() == 2
