from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from utils.hypergraph import Hypergraph, compress_set, is_left_compressed, left_compress_fixpoint, restrict_levels
from utils.lagrangian import (
    AlphaParams, compression_monotonicity_check, evaluate, gradient, optimize, pair_identity_residual,
    support_minimize,
)
from utils.oracle import exact_oracle

LEVELS = (1, 2, 3)

suite = settings(max_examples=200, derandomize=True, deadline=None)


@st.composite
def hypergraphs(draw, min_n=2, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pool = [e for r in LEVELS if r <= n for e in combinations(range(1, n + 1), r)]
    chosen = draw(st.sets(st.sampled_from(pool), min_size=1, max_size=len(pool)))
    return Hypergraph.from_edges(n, chosen)


@st.composite
def coefficients(draw):
    """One coefficient per level, used unanchored so any sub-hypergraph resolves."""
    values = {r: draw(st.floats(0.0, 2.0, allow_nan=False)) for r in LEVELS}
    return AlphaParams(coefficients=values, anchored=False)


@st.composite
def weightings(draw, n):
    raw = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=n, max_size=n))
    x = np.array(raw) + 1e-3
    return x / x.sum()


@st.composite
def instances(draw, min_n=2, max_n=5):
    hypergraph = draw(hypergraphs(min_n, max_n))
    return hypergraph, draw(coefficients()), draw(weightings(hypergraph.n))


@suite
@given(instances())
def test_gradient_matches_finite_differences(instance):
    hypergraph, alpha, x = instance
    g = gradient(hypergraph, alpha, x)
    h = 1e-6
    for i in range(hypergraph.n):
        step = np.zeros(hypergraph.n)
        step[i] = h
        # L is a polynomial in unconstrained x, so leaving the simplex is fine
        numeric = (evaluate(hypergraph, alpha, x + step) - evaluate(hypergraph, alpha, x - step)) / (2 * h)
        assert numeric == pytest.approx(g[i], abs=1e-6)


@suite
@given(instances())
def test_euler_identity(instance):
    hypergraph, alpha, x = instance
    weighted = sum(r * evaluate(restrict_levels(hypergraph, (r,)), alpha, x) for r in hypergraph.edge_types)
    assert float(x @ gradient(hypergraph, alpha, x)) == pytest.approx(weighted, abs=1e-12)


@suite
@given(instances(), st.data())
def test_compression_never_lowers_the_value(instance, data):
    hypergraph, alpha, x = instance
    x = np.sort(x)[::-1]
    i, j = data.draw(st.lists(st.integers(1, hypergraph.n), min_size=2, max_size=2, unique=True).map(sorted))
    assert compression_monotonicity_check(hypergraph, alpha, x, i, j)


@suite
@given(hypergraphs(), st.data())
def test_compression_preserves_edge_counts(hypergraph, data):
    i, j = data.draw(st.lists(st.integers(1, hypergraph.n), min_size=2, max_size=2, unique=True).map(sorted))
    assert compress_set(hypergraph, i, j).level_counts == hypergraph.level_counts
    fixed = left_compress_fixpoint(hypergraph)
    assert fixed.level_counts == hypergraph.level_counts
    assert is_left_compressed(fixed)


def anchored(alpha, hypergraph):
    """Default anchored parameters with the base pinned to the smallest level of H."""
    base = min(hypergraph.edge_types)
    above = {r: c for r, c in alpha.coefficients.items() if r > base}
    return AlphaParams(coefficients=above).anchored_to(hypergraph.edge_types)


def sub_hypergraph(hypergraph, data):
    ordered = hypergraph.sorted_edges()
    kept = data.draw(st.lists(st.sampled_from(ordered), unique=True, max_size=len(ordered)))
    return Hypergraph.from_edges(hypergraph.n, kept)


@suite
@given(hypergraphs(max_n=4), coefficients(), st.data())
def test_subgraph_never_has_a_larger_lagrangian(hypergraph, alpha, data):
    sub = sub_hypergraph(hypergraph, data)
    assert exact_oracle(sub, alpha).value <= exact_oracle(hypergraph, alpha).value + 1e-7


@suite
@given(hypergraphs(max_n=4), coefficients(), st.data())
def test_subgraph_monotonicity_with_a_pinned_base(hypergraph, alpha, data):
    alpha = anchored(alpha, hypergraph)
    sub = sub_hypergraph(hypergraph, data)
    assert exact_oracle(sub, alpha).value <= exact_oracle(hypergraph, alpha).value + 1e-7


@suite
@given(hypergraphs(max_n=4), coefficients())
def test_pair_identity_at_minimal_support_optima(hypergraph, alpha):
    compressed = left_compress_fixpoint(hypergraph)
    optimum = support_minimize(compressed, alpha, optimize(compressed, alpha))
    assert optimum.converged
    for i, j in combinations(optimum.support, 2):
        assert pair_identity_residual(compressed, alpha, optimum.x, i, j) <= 1e-7
