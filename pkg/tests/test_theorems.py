from math import comb

import numpy as np
import pytest
from conftest import edges

from utils.CountUtil import colex_range, connection_range
from utils.errors import AlphaError, HypothesisError, PreconditionError, UnknownTheoremError
from utils.evaluate import random_alpha, random_hypergraph
from utils.hypergraph import Hypergraph, colex_first_m, complete
from utils.lagrangian import AlphaParams, characteristic_vector, evaluate, optimize
from utils.oracle import exact_oracle
from utils.theorems import (
    LEVEL1_EXAMPLE, TheoremInstance, colex_range_equal, complete_uniform_value, connection_compose,
    level1_hypothesis, ms_value, reduce_level1, th1r_hypothesis, th1r_value, th2_hypothesis, th2_value,
    th123_hypothesis, th123_value, verify_theorem,
)

ONE = AlphaParams()
HALVES = AlphaParams(coefficients={2: 0.5, 3: 0.5})


def test_closed_forms():
    assert ms_value(5) == pytest.approx(0.4)
    assert ms_value(1) == 0.0
    assert th2_value(2.0, 4) == pytest.approx(1.75)
    assert th2_value(1.0, 3) == pytest.approx(4 / 3)
    assert th1r_value(1.0, 3, 3) == pytest.approx(1 + 1 / 27)
    assert th1r_value(2.0, 2, 4) == pytest.approx(th2_value(2.0, 4))
    assert th123_value(1.0, 1.0, 3) == pytest.approx(1 + 1 / 3 + 1 / 27)
    assert complete_uniform_value((3,), ONE, 4) == pytest.approx(1 / 16)
    with pytest.raises(PreconditionError):
        ms_value(0)
    with pytest.raises(PreconditionError):
        th1r_value(1.0, 1, 3)


def test_th2_hypothesis_is_inclusive():
    assert th2_hypothesis(2.0, 2).ok
    assert not th2_hypothesis(2.5, 2).ok


@pytest.mark.parametrize("alpha_r, r, t, ok, threshold, flagged", [
    (0.5, 3, 1, True, 1, True),
    (1.0, 3, 2, True, 1, True),
    (3.0, 3, 1, False, 2, False),
    (3.0, 3, 2, True, 2, False),
    (5.0, 4, 1, True, 1, False),
    (12.0, 4, 4, False, 5, False),
    (12.0, 4, 5, True, 5, False),
])
def test_th1r_hypothesis(alpha_r, r, t, ok, threshold, flagged):
    hypothesis = th1r_hypothesis(alpha_r, r, t)
    assert (hypothesis.ok, hypothesis.threshold, hypothesis.flagged) == (ok, threshold, flagged)


def test_th123_hypothesis():
    assert th123_hypothesis(1.0, 1.0, 2).threshold == 2
    assert not th123_hypothesis(1.0, 1.0, 1).ok
    assert th123_hypothesis(2.0, 0.0, 2).threshold == 2
    assert th123_hypothesis(0.5, 0.5, 1).ok
    with pytest.raises(PreconditionError):
        th123_hypothesis(0.0, 0.0, 3)


def test_level1_hypothesis():
    assert level1_hypothesis((1, 2, 3), AlphaParams(coefficients={2: 0.5, 3: 1.0})).ok
    assert not level1_hypothesis((1, 2, 3), AlphaParams(coefficients={2: 1.0, 3: 1.0})).ok
    assert level1_hypothesis((1, 4), AlphaParams(coefficients={4: 6.0})).ok


def test_reduce_level1():
    reduction = reduce_level1(LEVEL1_EXAMPLE, HALVES)
    assert reduction.kept == (1, 2, 3)
    assert reduction.isolated == {4, 5}
    assert reduction.value is None
    assert reduction.hypergraph.edges == frozenset(edges('1', '2', '3', '12', '13', '123'))
    assert reduction.hypothesis.ok


def test_reduce_level1_all_isolated():
    h = Hypergraph.from_edges(5, edges('1', '2', '3', '14', '34', '245'))
    reduction = reduce_level1(h, AlphaParams(coefficients={2: 0.5, 3: 1.0}))
    assert reduction.value == 1.0
    assert reduction.hypergraph is None
    assert reduction.isolated == {1, 2, 3}
    assert exact_oracle(h, AlphaParams(coefficients={2: 0.5, 3: 1.0})).value == pytest.approx(1.0, abs=1e-12)


def test_reduce_level1_needs_level_one():
    with pytest.raises(PreconditionError):
        reduce_level1(complete((2,), 3), ONE)


def test_colex_windows():
    assert colex_range((3,), 4) == (4, 7)
    assert colex_range((2, 3), 3) == (4, 7)
    assert colex_range_equal((3,), 4, 5)
    with pytest.raises(PreconditionError):
        colex_range_equal((3,), 4, 8)
    with pytest.raises(PreconditionError):
        colex_range((1, 3), 4)


@pytest.mark.parametrize("types, t, window", [
    ((1, 2), 2, (4, 6)),
    ((1, 2), 3, (7, 10)),
    ((1, 2), 4, (11, 15)),
    ((1, 3), 2, (3, 4)),
    ((1, 3), 3, (5, 8)),
])
def test_connection_windows(types, t, window):
    assert connection_range(types, t) == window


def test_connection_compose():
    alpha = AlphaParams(coefficients={2: 0.5})
    assert connection_compose((1, 2), alpha, 6, 2) == pytest.approx(7 / 6)
    assert connection_compose((1, 2), alpha, 4, 2) == pytest.approx(1.125)
    assert connection_compose((1, 3), AlphaParams(coefficients={3: 1.0}), 3, 2) == 1.0
    with pytest.raises(HypothesisError):
        connection_compose((1, 2), AlphaParams(coefficients={2: 2.0}), 6, 2)
    with pytest.raises(HypothesisError):
        connection_compose((1, 2), alpha, 3, 2)
    with pytest.raises(PreconditionError):
        connection_compose((2, 3), HALVES, 6, 2)


@pytest.mark.parametrize("types, alpha, t", [
    ((1, 2), AlphaParams(coefficients={2: 0.5}), 2),
    ((1, 2), AlphaParams(coefficients={2: 0.5}), 3),
    ((1, 2), AlphaParams(coefficients={2: 0.5}), 4),
    ((1, 3), AlphaParams(coefficients={3: 1.0}), 2),
    ((1, 3), AlphaParams(coefficients={3: 1.0}), 3),
    ((1, 3), AlphaParams(coefficients={3: 1.0}), 4),
])
def test_connection_compose_matches_colex_optimum(types, alpha, t, fast_cfg):
    lo, hi = connection_range(types, t)
    for m in range(lo, hi + 1):
        predicted = connection_compose(types, alpha, m, t, fast_cfg)
        assert optimize(colex_first_m(types, m), alpha, fast_cfg).value == pytest.approx(predicted, abs=1e-7)


@pytest.mark.parametrize("alpha2", [0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("t", range(3, 9))
def test_complete_12_graphs(alpha2, t, fast_cfg):
    alpha = AlphaParams(coefficients={2: alpha2})
    expected = th2_value(alpha2, t)
    clique = complete((1, 2), t)
    # three extra vertices joined to vertex 1 by 2-edges only
    pendant = Hypergraph.from_edges(t + 3, clique.sorted_edges() + [(1, t + k) for k in (1, 2, 3)])
    for h in (clique, pendant):
        assert optimize(h, alpha, fast_cfg).value == pytest.approx(expected, abs=1e-7)
        assert evaluate(h, alpha, characteristic_vector(range(1, t + 1), h.n)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("t", range(3, 9))
@pytest.mark.parametrize("alpha3", [0.5, 1.0, 2.0])
def test_complete_13_graphs(t, alpha3, fast_cfg):
    alpha = AlphaParams(coefficients={3: alpha3})
    assert th1r_hypothesis(alpha3, 3, t).ok
    value = optimize(complete((1, 3), t), alpha, fast_cfg).value
    assert value == pytest.approx(th1r_value(alpha3, 3, t), abs=1e-7)


@pytest.mark.parametrize("t", range(3, 9))
@pytest.mark.parametrize("alpha2, alpha3", [(0.5, 0.5), (1.0, 0.5), (0.5, 1.0)])
def test_complete_123_graphs(t, alpha2, alpha3, fast_cfg):
    alpha = AlphaParams(coefficients={2: alpha2, 3: alpha3})
    assert th123_hypothesis(alpha2, alpha3, t).ok
    value = optimize(complete((1, 2, 3), t), alpha, fast_cfg).value
    assert value == pytest.approx(th123_value(alpha2, alpha3, t), abs=1e-7)


@pytest.mark.parametrize("t", range(3, 7))
def test_colex_window_values(t, fast_cfg):
    lo, hi = colex_range((3,), t)
    assert (lo, hi) == (comb(t, 3), comb(t, 3) + comb(t - 1, 2))
    for m in range(lo, hi + 1):
        value = optimize(colex_first_m((3,), m), ONE, fast_cfg).value
        assert value == pytest.approx(comb(t, 3) / t ** 3, abs=1e-7)


@pytest.mark.parametrize("seed", range(20))
def test_level1_reduction_keeps_the_value(seed):
    rng = np.random.default_rng(seed)
    types = [(1, 2), (1, 3), (1, 2, 3)][seed % 3]
    n = int(rng.integers(3, 6))
    base = random_hypergraph(rng, n, types)
    # one more level-1 vertex in no other edge
    h = Hypergraph.from_edges(n + 1, base.sorted_edges() + [(n + 1,)])
    alpha = random_alpha(rng, types)
    reduction = reduce_level1(h, alpha)
    assert reduction.hypothesis.ok
    assert n + 1 in reduction.isolated
    expected = reduction.value if reduction.value is not None else exact_oracle(reduction.hypergraph, alpha).value
    assert exact_oracle(h, alpha).value == pytest.approx(expected, abs=1e-7)


def test_verify_theorem_passes():
    ms = verify_theorem('ms', TheoremInstance(t=5))
    assert ms.passed(1e-7)
    assert ms.predicted == pytest.approx(0.4)
    assert 'oracle_value' in ms.details

    th2 = verify_theorem('th2', TheoremInstance(alpha=AlphaParams(coefficients={2: 2.0}), t=4))
    assert th2.passed(1e-7)
    assert th2.computed == pytest.approx(1.75, abs=1e-7)

    th1r = verify_theorem('th1r', TheoremInstance(alpha=AlphaParams(coefficients={3: 1.0}), t=4, r=3))
    assert th1r.passed(1e-7)
    assert th1r.predicted == pytest.approx(1 + 1 / 16)
    assert th1r.details['flagged']

    th123 = verify_theorem('th123', TheoremInstance(alpha=HALVES, t=4))
    assert th123.passed(1e-7)
    assert th123.predicted == pytest.approx(1.21875)


def test_verify_theorem_failed_hypothesis():
    verdict = verify_theorem('th2', TheoremInstance(alpha=AlphaParams(coefficients={2: 5.0}), t=3))
    assert not verdict.hypothesis_ok
    assert not verdict.passed(1e-7)
    assert verdict.notes


def test_verify_theorem_level1_and_windows():
    assert verify_theorem('t12', TheoremInstance(alpha=HALVES)).passed(1e-7)
    lemma = verify_theorem('lemma34', TheoremInstance(types=(3,), m=5))
    assert lemma.passed(1e-7)
    assert lemma.details['window'] == [4, 7]
    connection = verify_theorem('connection', TheoremInstance(alpha=AlphaParams(coefficients={2: 0.5}),
                                                              types=(1, 2), m=6))
    assert connection.passed(1e-7)
    assert connection.predicted == pytest.approx(7 / 6)
    outside = verify_theorem('lemma34', TheoremInstance(types=(3,), m=8, t=4), cross_check=False)
    assert not outside.hypothesis_ok


def test_verify_theorem_errors():
    with pytest.raises(UnknownTheoremError):
        verify_theorem('fermat', TheoremInstance(t=3))
    with pytest.raises(AlphaError):
        verify_theorem('th2', TheoremInstance(t=3))
    with pytest.raises(PreconditionError):
        verify_theorem('ms', TheoremInstance())
    with pytest.raises(PreconditionError):
        verify_theorem('connection', TheoremInstance(types=(2, 3), m=6))
