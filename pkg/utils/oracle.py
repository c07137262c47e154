"""Brute-force maximization over every admissible support, used as ground
truth for small instances.

A support W can only carry an optimum with minimal support if every pair of
W lies in a common edge, so other supports are skipped. On left-compressed
inputs the weights of some optimum are nonincreasing, so only prefix
supports [k] are visited.
"""
import logging
import threading
from itertools import combinations
from math import comb

import numpy as np
from cachetools import LRUCache, cached

from utils.config import ORACLE_MAX_N, SolverConfig
from utils.errors import OracleLimitError, PreconditionError
from utils.hypergraph import covered_pairs, is_left_compressed
from utils.lagrangian import (
    LagrangianForm, _ascend, _clean, _polish, _trivial_optimum, build_optimum, select_best,
)

logger = logging.getLogger(__name__)

LATTICE_STEPS = 32
LATTICE_REFINEMENTS = 2
# larger supports get a coarser grid of at most this many points and no refinement
LATTICE_MAX_SUPPORT = 3
COARSE_LATTICE_POINTS = 5000
ORACLE_ASCENT_ITERS = 150
DIRICHLET_STARTS = 3


@cached(LRUCache(maxsize=64), lock=threading.Lock())
def _lattice(k, steps):
    """All points of the k-simplex with coordinates in (1/steps)Z (read-only)."""
    points = []
    for bars in combinations(range(steps + k - 1), k - 1):
        edges = (-1,) + bars + (steps + k - 1,)
        points.append([edges[p + 1] - edges[p] - 1 for p in range(k)])
    points = np.array(points, dtype=float) / steps
    points.setflags(write=False)
    return points


def _local_grid(center, h, radius=8):
    k = center.size
    offsets = np.arange(-radius, radius + 1) * h
    free = np.stack(np.meshgrid(*[offsets] * (k - 1), indexing='ij'), axis=-1).reshape(-1, k - 1)
    points = np.empty((free.shape[0], k))
    points[:, :-1] = center[:-1] + free
    points[:, -1] = 1.0 - points[:, :-1].sum(axis=1)
    return points[np.all(points >= 0, axis=1)]


def _lattice_steps(k):
    if k <= LATTICE_MAX_SUPPORT:
        return LATTICE_STEPS
    steps = 1
    while comb(steps + k, k - 1) <= COARSE_LATTICE_POINTS:
        steps += 1
    return steps


def _lattice_scan(form, support):
    k = support.size
    steps = _lattice_steps(k)

    def embed(points):
        block = np.zeros((points.shape[0], form.n))
        block[:, support] = points
        return block

    points = _lattice(k, steps)
    values = form.value(embed(points))
    best = points[int(np.argmax(values))]
    h = 1.0 / steps
    for _ in range(LATTICE_REFINEMENTS):
        if k == 1 or k > LATTICE_MAX_SUPPORT:
            break
        h /= 8.0
        points = _local_grid(best, h)
        values = form.value(embed(points))
        best = points[int(np.argmax(values))]
    full = np.zeros(form.n)
    full[support] = best
    return full


def _supports(hypergraph):
    n = hypergraph.n
    if is_left_compressed(hypergraph):
        for k in range(1, n + 1):
            yield tuple(range(1, k + 1))
        return
    pairs = covered_pairs(hypergraph)
    for k in range(1, n + 1):
        for w in combinations(range(1, n + 1), k):
            if all(pair in pairs for pair in combinations(w, 2)):
                yield w


def _solve_support(form, w, cfg, rng):
    support = np.array(w, dtype=np.intp) - 1
    mask = np.zeros(form.n, dtype=bool)
    mask[support] = True
    k = support.size
    starts = []
    uniform = np.zeros(form.n)
    uniform[support] = 1.0 / k
    starts.append(uniform)
    if k > 1:
        for _ in range(DIRICHLET_STARTS):
            x = np.zeros(form.n)
            x[support] = rng.dirichlet(np.ones(k))
            starts.append(x)
    if k > LATTICE_MAX_SUPPORT:
        # half the weight on one vertex, the rest spread evenly
        for v in support:
            x = np.zeros(form.n)
            x[support] = 0.5 / (k - 1)
            x[v] = 0.5
            starts.append(x)
    starts.append(_lattice_scan(form, support))

    found = []
    for x in starts:
        found.append(x)
        y = _polish(form, x, cfg)
        if np.all(y >= 0):
            found.append(y)
    ascended, _ = _ascend(form, uniform, mask, cfg.polish_tol, ORACLE_ASCENT_ITERS)
    found.append(ascended)
    found.append(_polish(form, ascended, cfg))
    return [(form.value(x), x) for x in (_clean(x, cfg.support_threshold) for x in found)]


def exact_oracle(hypergraph, alpha, cfg=None, max_n=None):
    cfg = cfg or SolverConfig()
    max_n = ORACLE_MAX_N if max_n is None else max_n
    if hypergraph.n > max_n:
        raise OracleLimitError(f"exact oracle handles n <= {max_n}, got n = {hypergraph.n}")
    if hypergraph.n == 0:
        raise PreconditionError("cannot optimize over an empty vertex set")
    form = LagrangianForm(hypergraph, alpha)
    if not hypergraph.edges:
        return _trivial_optimum(hypergraph)
    rng = np.random.default_rng(cfg.seed)
    candidates = []
    visited = 0
    for w in _supports(hypergraph):
        candidates.extend(_solve_support(form, w, cfg, rng))
        visited += 1
    _, best = select_best(candidates, cfg.value_tol)
    optimum = build_optimum(form, best, visited, cfg)
    logger.debug("oracle n=%d visited %d supports -> %.12g", hypergraph.n, visited, optimum.value)
    return optimum
