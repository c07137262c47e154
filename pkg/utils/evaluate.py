import logging
from itertools import combinations
from math import factorial

import numpy as np
import pandas as pd

from utils.config import SolverConfig
from utils.hypergraph import Hypergraph
from utils.lagrangian import AlphaParams, optimize
from utils.oracle import exact_oracle

logger = logging.getLogger(__name__)

CORPUS_LEVELS = (1, 2, 3, 4)


def random_hypergraph(rng, n, types, density=0.4):
    """Random T-graph on [n]: each r-subset kept with probability density,
    with at least one edge per level."""
    edges = []
    for r in types:
        pool = list(combinations(range(1, n + 1), r))
        keep = [e for e in pool if rng.random() < density]
        if not keep:
            keep = [pool[rng.integers(len(pool))]]
        edges.extend(keep)
    return Hypergraph.from_edges(n, edges)


def random_alpha(rng, types):
    """Base level fixed to 1; the other levels share a random budget so that
    sum alpha_r/(r-1)! <= 1."""
    upper = types[1:]
    if not upper:
        return AlphaParams()
    budget = rng.uniform(0.1, 1.0)
    shares = rng.dirichlet(np.ones(len(upper))) * budget
    return AlphaParams(coefficients={r: float(share * factorial(r - 1)) for r, share in zip(upper, shares)})


def random_corpus(size=50, seed=0, max_n=8):
    rng = np.random.default_rng(seed)
    corpus = []
    while len(corpus) < size:
        n = int(rng.integers(2, max_n + 1))
        levels = [r for r in CORPUS_LEVELS if r <= n and rng.random() < 0.5]
        if not levels:
            continue
        corpus.append((random_hypergraph(rng, n, levels), random_alpha(rng, tuple(levels))))
    return corpus


def evaluate_consistency(corpus, cfg=None):
    """Optimizer against the exact oracle, one row per instance."""
    cfg = cfg or SolverConfig()
    rows = []
    for index, (hypergraph, alpha) in enumerate(corpus):
        solved = optimize(hypergraph, alpha, cfg)
        oracle = exact_oracle(hypergraph, alpha, cfg)
        rows.append({
            'instance': index,
            'n': hypergraph.n,
            'T': ','.join(str(r) for r in hypergraph.edge_types),
            'edges': len(hypergraph),
            'optimize': solved.value,
            'oracle': oracle.value,
            'gap': abs(solved.value - oracle.value),
            'converged': solved.converged,
        })
        logger.debug("instance %d: optimize %.12g oracle %.12g", index, solved.value, oracle.value)
    return pd.DataFrame(rows)
