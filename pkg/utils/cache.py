import logging
import threading

from cachetools import LRUCache

from utils.config import CACHE_SIZE, SolverConfig
from utils.lagrangian import optimize
from utils.oracle import exact_oracle

logger = logging.getLogger(__name__)

# the oracle cross-check is affordable up to this many vertices
CROSS_CHECK_MAX_N = 8

_solved = LRUCache(maxsize=CACHE_SIZE)
_lock = threading.Lock()


def _memo(kind, solver, hypergraph, alpha, cfg):
    key = (kind, hypergraph, alpha.key(), cfg.key())
    with _lock:
        cached = _solved.get(key)
    if cached is None:
        cached = solver(hypergraph, alpha, cfg)
        with _lock:
            _solved[key] = cached
    return cached


def get_oracle(hypergraph, alpha, cfg=None):
    return _memo('oracle', exact_oracle, hypergraph, alpha, cfg or SolverConfig())


def get_optimum(hypergraph, alpha, cfg=None, cross_check=False):
    """Memoized optimum of L_alpha(H). With cross_check, instances on at most
    CROSS_CHECK_MAX_N vertices are also solved by the exact oracle and the
    better of the two is returned."""
    cfg = cfg or SolverConfig()
    optimum = _memo('optimize', optimize, hypergraph, alpha, cfg)
    if not cross_check or hypergraph.n > CROSS_CHECK_MAX_N:
        return optimum
    oracle = get_oracle(hypergraph, alpha, cfg)
    if oracle.value > optimum.value + cfg.value_tol:
        logger.warning("oracle beat the optimizer on n=%d levels=%s: %.12g > %.12g",
                       hypergraph.n, hypergraph.level_counts, oracle.value, optimum.value)
        return oracle
    return optimum


def clear_cache():
    with _lock:
        _solved.clear()


def cache_size():
    with _lock:
        return len(_solved)
