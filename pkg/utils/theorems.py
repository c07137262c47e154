"""Closed forms, hypothesis thresholds and verifiers for the computable
statements about parametrized Lagrangians.

Coefficients are indexed by edge cardinality throughout: alpha_2 weights the
2-edges, alpha_r the r-edges, and level 1 (when present) carries 1.
"""
import logging
from dataclasses import dataclass, field
from math import ceil, comb, factorial
from typing import Any

from pydantic import BaseModel

from utils.cache import CROSS_CHECK_MAX_N, get_optimum, get_oracle
from utils.config import SolverConfig
from utils.CountUtil import colex_range, connection_range, find_colex_t, find_connection_t
from utils.errors import AlphaError, HypothesisError, PreconditionError, UnknownTheoremError
from utils.hypergraph import (
    Hypergraph, colex_first_m, complete, edge_type_set, induced, isolated_vertices, max_clique_order,
    maximum_cliques,
)
from utils.lagrangian import AlphaParams, Optimum, characteristic_vector, evaluate

logger = logging.getLogger(__name__)

__all__ = [
    'Hypothesis', 'Reduction', 'TheoremInstance', 'TheoremVerdict', 'THEOREM_VERIFIERS',
    'colex_range', 'colex_range_equal', 'complete_uniform_value', 'connection_compose',
    'connection_range', 'level1_hypothesis', 'ms_value', 'reduce_level1', 'th123_hypothesis',
    'th123_value', 'th1r_hypothesis', 'th1r_value', 'th2_hypothesis', 'th2_value', 'verify_theorem',
]

# float noise guard for the ceiling thresholds
CEIL_SLACK = 1e-12
COEFFICIENT_SUM = "sum_r alpha_r/(r-1)! <= 1"

# H = {1,2,3,4,5} + {12,13} + {123,356}: vertex 4 is isolated, 4 and 5 are isolated in H[V(H^1)]
LEVEL1_EXAMPLE = Hypergraph.from_edges(6, [(1,), (2,), (3,), (4,), (5,), (1, 2), (1, 3), (1, 2, 3), (3, 5, 6)])


class Hypothesis(BaseModel):
    ok: bool
    description: str
    threshold: float | None = None
    flagged: bool = False


class TheoremVerdict(BaseModel):
    theorem_id: str
    hypothesis_ok: bool
    predicted: float
    computed: float
    abs_error: float
    witness: Optimum | None = None
    details: dict[str, Any] = {}
    notes: list[str] = []

    def passed(self, tol):
        return self.hypothesis_ok and self.abs_error <= tol


@dataclass(frozen=True)
class Reduction:
    hypergraph: Hypergraph | None
    value: float | None
    kept: tuple
    isolated: frozenset
    hypothesis: Hypothesis


@dataclass
class TheoremInstance:
    alpha: AlphaParams = field(default_factory=AlphaParams)
    hypergraph: Hypergraph | None = None
    t: int | None = None
    r: int | None = None
    m: int | None = None
    types: tuple | None = None


def _check_t(t):
    if t < 1:
        raise PreconditionError(f"clique order t must be at least 1, got {t}")


def ms_value(t):
    _check_t(t)
    return 0.5 * (1.0 - 1.0 / t)


def th2_value(alpha2, t):
    _check_t(t)
    return 1.0 + alpha2 / 2.0 - alpha2 / (2.0 * t)


def th2_hypothesis(alpha2, t):
    return Hypothesis(ok=t >= alpha2, threshold=alpha2, description=f"t >= alpha_2 ({t} >= {alpha2:g})")


def th1r_value(alpha_r, r, t):
    if r < 2:
        raise PreconditionError(f"r must be at least 2, got {r}")
    _check_t(t)
    product = 1
    for i in range(1, r):
        product *= t - i
    return 1.0 + alpha_r * product / (factorial(r) * t ** (r - 1))


def th1r_hypothesis(alpha_r, r, t):
    if r < 2:
        raise PreconditionError(f"r must be at least 2, got {r}")
    base = factorial(r - 2)
    if alpha_r <= base:
        # no t can violate the bound in this regime
        return Hypothesis(ok=t >= 1, threshold=1, flagged=True,
                          description=f"alpha_{r} <= (r-2)! = {base}; threshold taken as 1")
    threshold = ceil((alpha_r - base) ** (r - 2) / (base * alpha_r ** (r - 3)) - CEIL_SLACK)
    return Hypothesis(ok=t >= threshold, threshold=threshold,
                      description=f"t >= ceil((alpha_{r}-(r-2)!)^(r-2) / ((r-2)! alpha_{r}^(r-3))) = {threshold}")


def th123_value(alpha2, alpha3, t):
    _check_t(t)
    return 1.0 + alpha2 * (t - 1) / (2.0 * t) + alpha3 * (t - 1) * (t - 2) / (6.0 * t * t)


def th123_hypothesis(alpha2, alpha3, t):
    total = alpha2 + alpha3
    if total <= 0:
        raise PreconditionError("the threshold needs alpha_2 + alpha_3 > 0")
    threshold = ceil((total * total - alpha3) / total - CEIL_SLACK)
    return Hypothesis(ok=t >= threshold, threshold=threshold,
                      description=f"t >= ceil(((alpha_2+alpha_3)^2 - alpha_3)/(alpha_2+alpha_3)) = {threshold}")


def complete_uniform_value(types, alpha, t):
    """L(K_t^T, uniform weighting) = sum_r alpha_r C(t,r) / t^r"""
    types = edge_type_set(types)
    _check_t(t)
    coefficients = alpha.resolve(types)
    return sum(coefficients[r] * comb(t, r) / t ** r for r in types)


def level1_hypothesis(types, alpha):
    types = edge_type_set(types)
    coefficients = alpha.resolve(types)
    total = sum(coefficients[r] / factorial(r - 1) for r in types if r >= 2)
    return Hypothesis(ok=total <= 1.0 + CEIL_SLACK, threshold=1.0,
                      description=f"{COEFFICIENT_SUM} (sum = {total:.12g})")


def reduce_level1(hypergraph, alpha):
    """Drop the level-1 vertices that are isolated inside H[V(H^1)]; if all of
    them are, the Lagrangian is exactly 1."""
    if 1 not in hypergraph.edge_types:
        raise PreconditionError("level-1 reduction needs level-1 edges")
    hypothesis = level1_hypothesis(hypergraph.edge_types, alpha)
    if not hypothesis.ok:
        logger.warning("level-1 reduction outside its hypothesis: %s", hypothesis.description)
    singles = sorted(edge[0] for edge in hypergraph.level(1))
    base = induced(hypergraph, singles)
    original = {new: old for old, new in base.relabel.items()}
    isolated = frozenset(original[v] for v in isolated_vertices(base.hypergraph))
    kept = tuple(v for v in singles if v not in isolated)
    if not kept:
        return Reduction(None, 1.0, kept, isolated, hypothesis)
    return Reduction(induced(hypergraph, kept).hypergraph, None, kept, isolated, hypothesis)


def colex_range_equal(types, t, m):
    """Precondition check for L(C_{m,T}) = L([t]^T)."""
    lo, hi = colex_range(types, t)
    if not lo <= m <= hi:
        raise PreconditionError(f"m = {m} is outside the colex window [{lo}, {hi}] for t = {t}")
    return True


def _q_value(types, alpha, m_q, cfg):
    """L(C_{m_q,Q}) with the coefficients of T taken literally on Q = T minus {1}."""
    if m_q <= 0:
        return 0.0
    q = tuple(r for r in types if r != 1)
    alpha_q = alpha.restricted(q).unanchored()
    t_q = find_colex_t(q, m_q)
    if t_q is not None:
        return complete_uniform_value(q, alpha_q, t_q)
    return get_optimum(colex_first_m(q, m_q), alpha_q, cfg).value


def _connection_failures(types, alpha, m, t):
    failures = []
    if not level1_hypothesis(types, alpha).ok:
        failures.append(COEFFICIENT_SUM)
    lo, hi = connection_range(types, t)
    if not lo <= m <= hi:
        failures.append(f"t + sum C(t,r) < m <= t + 1 + sum C(t+1,r) (t = {t}, m = {m}, window [{lo}, {hi}])")
    return failures


def connection_compose(types, alpha, m, t, cfg=None):
    """1 + L(C_{m-t-1,Q}), the predicted L(C_{m,T}) for T containing level 1."""
    types = edge_type_set(types)
    if 1 not in types or len(types) < 2:
        raise PreconditionError("composition needs level 1 and at least one higher level")
    failures = _connection_failures(types, alpha, m, t)
    if failures:
        raise HypothesisError(failures[0])
    return 1.0 + _q_value(types, alpha, m - t - 1, cfg or SolverConfig())


def _coefficient(alpha, r, theorem_id):
    if r not in alpha.coefficients:
        raise AlphaError(f"{theorem_id} needs a coefficient for level {r} (--alpha {r}=value)")
    return alpha.coefficients[r]


def _require(value, name, theorem_id):
    if value is None:
        raise PreconditionError(f"{theorem_id} needs --{name}")
    return value


def _solve(hypergraph, alpha, cfg, cross_check):
    optimum = get_optimum(hypergraph, alpha, cfg)
    details = {}
    if cross_check and hypergraph.n <= CROSS_CHECK_MAX_N and hypergraph.n > 0:
        oracle = get_oracle(hypergraph, alpha, cfg)
        details['oracle_value'] = oracle.value
        if oracle.value > optimum.value + cfg.value_tol:
            optimum = oracle
    return optimum, details


def _clique_value(hypergraph, alpha, types):
    cliques = maximum_cliques(hypergraph, types, limit=1)
    if not cliques:
        return None
    return evaluate(hypergraph, alpha, characteristic_vector(cliques[0], hypergraph.n))


def _verdict(theorem_id, hypothesis_ok, predicted, optimum, details, notes):
    return TheoremVerdict(theorem_id=theorem_id, hypothesis_ok=hypothesis_ok, predicted=predicted,
                          computed=optimum.value, abs_error=abs(predicted - optimum.value),
                          witness=optimum, details=details, notes=notes)


def _verify_ms(instance, cfg, cross_check):
    hypergraph = instance.hypergraph
    if hypergraph is None:
        t = _require(instance.t, 't', 'ms')
        hypergraph = complete((2,), t) if t >= 2 else Hypergraph.empty(max(t, 1))
    order = max_clique_order(hypergraph, (2,))
    t = max(order, 1)
    notes = []
    structural = set(hypergraph.edge_types) <= {2}
    if not structural:
        notes.append("graph has levels other than 2")
    optimum, details = _solve(hypergraph, instance.alpha, cfg, cross_check)
    details['t'] = t
    clique = _clique_value(hypergraph, instance.alpha, (2,))
    if clique is not None:
        details['clique_value'] = clique
    return _verdict('ms', structural, ms_value(t), optimum, details, notes)


def _verify_th2(instance, cfg, cross_check):
    alpha2 = _coefficient(instance.alpha, 2, 'th2')
    hypergraph = instance.hypergraph or complete((1, 2), _require(instance.t, 't', 'th2'))
    t = max_clique_order(hypergraph, (1, 2))
    hypothesis = th2_hypothesis(alpha2, t)
    notes = [] if hypothesis.ok else [f"hypothesis failed: {hypothesis.description}"]
    structural = hypergraph.edge_types == (1, 2)
    if not structural:
        notes.append("graph is not a {1,2}-graph")
    optimum, details = _solve(hypergraph, instance.alpha, cfg, cross_check)
    details['t'] = t
    clique = _clique_value(hypergraph, instance.alpha, (1, 2))
    if clique is not None:
        details['clique_value'] = clique
    return _verdict('th2', hypothesis.ok and structural, th2_value(alpha2, max(t, 1)), optimum, details, notes)


def _verify_th1r(instance, cfg, cross_check):
    hypergraph = instance.hypergraph
    r = instance.r
    if r is None and hypergraph is not None:
        r = next((level for level in hypergraph.edge_types if level != 1), None)
    r = r or 3
    alpha_r = _coefficient(instance.alpha, r, 'th1r')
    if hypergraph is None:
        hypergraph = complete((1, r), _require(instance.t, 't', 'th1r'))
    t = max_clique_order(hypergraph, (1, r))
    singles = max_clique_order(hypergraph, (1,))
    hypothesis = th1r_hypothesis(alpha_r, r, max(t, 1))
    notes = []
    if hypothesis.flagged or not hypothesis.ok:
        notes.append(hypothesis.description)
    structural = hypergraph.edge_types == (1, r) and t == singles
    if not structural:
        notes.append(f"need a {{1,{r}}}-graph whose level-1 clique has the clique order t")
    optimum, details = _solve(hypergraph, instance.alpha, cfg, cross_check)
    details.update(t=t, r=r, threshold=hypothesis.threshold, flagged=hypothesis.flagged)
    clique = _clique_value(hypergraph, instance.alpha, (1, r))
    if clique is not None:
        details['clique_value'] = clique
    return _verdict('th1r', hypothesis.ok and structural, th1r_value(alpha_r, r, max(t, 1)),
                    optimum, details, notes)


def _verify_th123(instance, cfg, cross_check):
    alpha2 = _coefficient(instance.alpha, 2, 'th123')
    alpha3 = _coefficient(instance.alpha, 3, 'th123')
    hypergraph = instance.hypergraph or complete((1, 2, 3), _require(instance.t, 't', 'th123'))
    t = max_clique_order(hypergraph, (1, 2, 3))
    singles = max_clique_order(hypergraph, (1,))
    hypothesis = th123_hypothesis(alpha2, alpha3, max(t, 1))
    notes = [] if hypothesis.ok else [f"hypothesis failed: {hypothesis.description}"]
    structural = hypergraph.edge_types == (1, 2, 3) and t == singles
    if not structural:
        notes.append("need a {1,2,3}-graph whose level-1 clique has the clique order t")
    optimum, details = _solve(hypergraph, instance.alpha, cfg, cross_check)
    details.update(t=t, threshold=hypothesis.threshold)
    clique = _clique_value(hypergraph, instance.alpha, (1, 2, 3))
    if clique is not None:
        details['clique_value'] = clique
    return _verdict('th123', hypothesis.ok and structural, th123_value(alpha2, alpha3, max(t, 1)),
                    optimum, details, notes)


def _verify_t12(instance, cfg, cross_check):
    hypergraph = instance.hypergraph or LEVEL1_EXAMPLE
    alpha = instance.alpha.anchored_to(hypergraph.edge_types)
    reduction = reduce_level1(hypergraph, alpha)
    notes = [] if reduction.hypothesis.ok else [f"hypothesis failed: {reduction.hypothesis.description}"]
    details = {'kept': list(reduction.kept), 'isolated': sorted(reduction.isolated)}
    if reduction.value is not None:
        predicted = reduction.value
    else:
        reduced, _ = _solve(reduction.hypergraph, alpha, cfg, cross_check)
        predicted = reduced.value
    optimum, solved = _solve(hypergraph, alpha, cfg, cross_check)
    details.update(solved)
    return _verdict('t12', reduction.hypothesis.ok, predicted, optimum, details, notes)


def _verify_lemma34(instance, cfg, cross_check):
    types = edge_type_set(instance.types or (3,))
    m = _require(instance.m, 'm', 'lemma34')
    t = instance.t or find_colex_t(types, m)
    notes = []
    if t is None:
        t = 1
        hypothesis_ok = False
        notes.append(f"m = {m} lies in no colex window")
    else:
        try:
            hypothesis_ok = colex_range_equal(types, t, m)
        except PreconditionError as e:
            hypothesis_ok = False
            notes.append(str(e))
    hypergraph = colex_first_m(types, m)
    optimum, details = _solve(hypergraph, instance.alpha, cfg, cross_check)
    details.update(t=t, m=m, window=list(colex_range(types, t)))
    return _verdict('lemma34', hypothesis_ok, complete_uniform_value(types, instance.alpha, t),
                    optimum, details, notes)


def _verify_connection(instance, cfg, cross_check):
    types = edge_type_set(instance.types or (1, 2))
    if 1 not in types or len(types) < 2:
        raise PreconditionError("connection needs level 1 and at least one higher level")
    m = _require(instance.m, 'm', 'connection')
    t = instance.t or find_connection_t(types, m)
    notes = []
    if t is None:
        t = 1
        notes.append(f"m = {m} lies in no connection window")
    failures = _connection_failures(types, instance.alpha, m, t)
    notes.extend(f"hypothesis failed: {failure}" for failure in failures)
    predicted = 1.0 + _q_value(types, instance.alpha, m - t - 1, cfg)
    optimum, details = _solve(colex_first_m(types, m), instance.alpha, cfg, cross_check)
    details.update(t=t, m=m, window=list(connection_range(types, t)))
    # the Q-part coefficients are taken by cardinality, not shifted by one position
    details['q_alignment'] = 'by cardinality'
    return _verdict('connection', not failures, predicted, optimum, details, notes)


THEOREM_VERIFIERS = {
    'ms': _verify_ms,
    'th2': _verify_th2,
    'th1r': _verify_th1r,
    'th123': _verify_th123,
    't12': _verify_t12,
    'lemma34': _verify_lemma34,
    'connection': _verify_connection,
}


def verify_theorem(theorem_id, instance, cfg=None, cross_check=True):
    """Closed-form prediction against the computed optimum of one instance."""
    if theorem_id not in THEOREM_VERIFIERS:
        raise UnknownTheoremError(f"unknown theorem id {theorem_id!r}; expected one of "
                                  f"{', '.join(THEOREM_VERIFIERS)}")
    verdict = THEOREM_VERIFIERS[theorem_id](instance, cfg or SolverConfig(), cross_check)
    logger.info("%s: predicted %.12g computed %.12g (hypothesis %s)", theorem_id, verdict.predicted,
                verdict.computed, 'ok' if verdict.hypothesis_ok else 'failed')
    return verdict
