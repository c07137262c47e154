"""Evaluation and maximization of the parametrized Lagrangian

    L_alpha(H, x) = sum_r alpha_r * sum_{e in E^r} prod_{v in e} x_v

over the standard simplex. Coefficients are indexed by edge cardinality; the
smallest level of H carries coefficient 1 unless the parameters are built
unanchored (used for the Q-part of level-1 decompositions).
"""
import logging
import math
from itertools import combinations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from utils.config import SolverConfig
from utils.errors import AlphaError, DimensionError, InfeasibleWeightingError, PreconditionError
from utils.executor import execute_all
from utils.hypergraph import (
    compress_set, covered_pairs, left_compress_fixpoint, link_sets, maximum_cliques, relabel_by_weight,
)

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-12
MONOTONICITY_SLACK = 1e-12


class AlphaParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    coefficients: dict[int, float] = {}
    anchored: bool = True
    base: int | None = Field(default=None, ge=1)

    @field_validator('coefficients')
    @classmethod
    def _check_coefficients(cls, value):
        for r, c in value.items():
            if r < 1:
                raise ValueError(f"levels start at 1, got {r}")
            if not math.isfinite(c) or c < 0:
                raise ValueError(f"alpha_{r} must be a finite nonnegative number, got {c}")
        return value

    @classmethod
    def from_mapping(cls, coefficients, anchored=True):
        try:
            return cls(coefficients=dict(coefficients), anchored=anchored)
        except ValidationError as e:
            raise AlphaError(e.errors()[0]['msg']) from None

    @classmethod
    def ones(cls, types):
        return cls(coefficients={r: 1.0 for r in types})

    def anchored_to(self, types):
        """Pin the base level to min(types); sub-hypergraphs then resolve
        against the same base instead of their own smallest level."""
        if not self.anchored or self.base is not None or not types:
            return self
        return self.model_copy(update={'base': min(types)})

    def resolve(self, types):
        """Coefficient per level of T. When anchored, the base level (pinned,
        else the smallest level of T) carries 1."""
        base = self.base if self.base is not None else min(types, default=None)
        resolved = {}
        for r in sorted(types):
            if self.anchored and r == base:
                c = self.coefficients.get(r, 1.0)
                if c != 1.0:
                    raise AlphaError(f"base level {r} has coefficient {c}; it is fixed to 1")
                resolved[r] = 1.0
            elif r in self.coefficients:
                resolved[r] = self.coefficients[r]
            else:
                raise AlphaError(f"no alpha given for level {r}")
        return resolved

    def unanchored(self):
        return AlphaParams(coefficients=dict(self.coefficients), anchored=False)

    def restricted(self, types):
        keep = set(types)
        return AlphaParams(coefficients={r: c for r, c in self.coefficients.items() if r in keep},
                           anchored=self.anchored, base=self.base)

    def key(self):
        return tuple(sorted(self.coefficients.items())), self.anchored, self.base


class Optimum(BaseModel):
    value: float
    weighting: list[float]
    support: list[int]
    kkt_residual: float
    starts_used: int = 0
    converged: bool = True

    @property
    def x(self):
        return np.array(self.weighting)

    def summary(self):
        return self.model_dump(include={'value', 'weighting', 'support', 'kkt_residual', 'converged'})


class KKTReport(BaseModel):
    residual: float
    exterior_violation: float
    support: list[int]
    uncovered_pairs: list[tuple[int, int]]
    stationary: bool

    @property
    def covered(self):
        return not self.uncovered_pairs


class LagrangianForm:
    """L_alpha(H, .) compiled to index arrays, one block per level."""

    def __init__(self, hypergraph, alpha):
        self.hypergraph = hypergraph
        self.n = hypergraph.n
        coefficients = alpha.resolve(hypergraph.edge_types)
        self.coefficients = coefficients
        self.terms = [(r, coefficients[r], np.array(level, dtype=np.intp) - 1)
                      for r, level in hypergraph.levels.items()]

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise DimensionError(f"weighting has length {x.shape[-1]}, expected {self.n}")
        return x

    def value(self, x):
        x = self._check(x)
        total = np.zeros(x.shape[:-1])
        for _, c, idx in self.terms:
            total = total + c * np.prod(x[..., idx], axis=-1).sum(axis=-1)
        return float(total) if total.ndim == 0 else total

    def gradient(self, x):
        x = self._check(x)
        g = np.zeros(self.n)
        for r, c, idx in self.terms:
            block = x[idx]
            for p in range(r):
                others = np.prod(np.delete(block, p, axis=1), axis=1)
                np.add.at(g, idx[:, p], c * others)
        return g

    def hessian(self, x):
        x = self._check(x)
        h = np.zeros((self.n, self.n))
        for r, c, idx in self.terms:
            if r < 2:
                continue
            block = x[idx]
            for p, q in combinations(range(r), 2):
                others = np.prod(np.delete(block, [p, q], axis=1), axis=1)
                np.add.at(h, (idx[:, p], idx[:, q]), c * others)
        return h + h.T


def evaluate(hypergraph, alpha, x):
    return LagrangianForm(hypergraph, alpha).value(x)


def gradient(hypergraph, alpha, x):
    return LagrangianForm(hypergraph, alpha).gradient(x)


def as_weighting(x, n=None, tol=SIMPLEX_TOL):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError("a weighting is a vector")
    if n is not None and x.size != n:
        raise DimensionError(f"weighting has length {x.size}, expected {n}")
    if not np.all(np.isfinite(x)) or np.any(x < 0) or abs(x.sum() - 1.0) > tol:
        raise InfeasibleWeightingError("weights must be nonnegative and sum to 1")
    return x


def project_to_simplex(v):
    """Euclidean projection onto the standard simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise PreconditionError("cannot project a vector with non-finite entries")
    if np.all(v >= 0) and abs(v.sum() - 1.0) <= SIMPLEX_TOL:
        return v.copy()
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, v.size + 1) > (cssv - 1.0))[0][-1]
    theta = (cssv[rho] - 1.0) / (rho + 1.0)
    w = np.clip(v - theta, 0.0, None)
    return w / w.sum()


def characteristic_vector(subset, n):
    members = sorted(set(subset))
    if not members:
        raise PreconditionError("characteristic vector of an empty set")
    if members[0] < 1 or members[-1] > n:
        raise PreconditionError(f"set {members} is not inside [1, {n}]")
    x = np.zeros(n)
    x[np.array(members) - 1] = 1.0 / len(members)
    return x


def _project_masked(v, mask):
    w = np.zeros_like(v)
    w[mask] = project_to_simplex(v[mask])
    return w


def _stationarity(x, g, mask):
    return float(np.abs(_project_masked(x + g, mask) - x).max())


def _ascend(form, x, mask, tol, max_iters):
    """Projected gradient ascent with backtracking, restricted to the coordinates in mask."""
    x = _project_masked(x, mask)
    f = form.value(x)
    step = 1.0
    for iteration in range(max_iters):
        g = form.gradient(x)
        if _stationarity(x, g, mask) <= tol:
            return x, iteration
        while True:
            y = _project_masked(x + step * g, mask)
            fy = form.value(y)
            if fy >= f + 1e-4 * float(g @ (y - x)):
                break
            step *= 0.5
            if step < 1e-16:
                return x, iteration
        if np.array_equal(y, x):
            return x, iteration
        x, f = y, fy
        step = min(step * 2.0, 1e4)
    return x, max_iters


def _polish(form, x, cfg):
    """Damped Newton on the stationarity system of the current support:
    equal partial derivatives across the support, weights summing to 1."""
    support = np.flatnonzero(x > cfg.support_threshold)
    k = support.size
    if k <= 1:
        return x
    z = x[support] / x[support].sum()

    def residual(z, mu):
        full = np.zeros(form.n)
        full[support] = z
        g = form.gradient(full)
        return full, np.append(g[support] - mu, z.sum() - 1.0)

    full = np.zeros(form.n)
    full[support] = z
    mu = float(form.gradient(full)[support].mean())
    full, F = residual(z, mu)
    norm = float(np.abs(F).max())
    for _ in range(cfg.newton_iters):
        if norm <= cfg.tol:
            break
        jac = np.zeros((k + 1, k + 1))
        jac[:k, :k] = form.hessian(full)[np.ix_(support, support)]
        jac[:k, k] = -1.0
        jac[k, :k] = 1.0
        d = np.linalg.lstsq(jac, -F, rcond=None)[0]
        t = 1.0
        while t >= 1e-6:
            zn = z + t * d[:k]
            if zn.min() > 0:
                fulln, Fn = residual(zn, mu + t * d[k])
                normn = float(np.abs(Fn).max())
                if normn < norm:
                    z, mu, full, F, norm = zn, mu + t * d[k], fulln, Fn, normn
                    break
            t *= 0.5
        else:
            break
    return full / full.sum()


def _clean(x, threshold):
    x = np.where(x > threshold, x, 0.0)
    return x / x.sum()


def _local_solve(form, x0, mask, cfg):
    x, _ = _ascend(form, x0, mask, cfg.polish_tol, cfg.max_iters)
    for _ in range(2):
        before = form.value(x)
        y = _polish(form, x, cfg)
        if form.value(y) >= before - 1e-13:
            x = y
        x = _clean(x, cfg.support_threshold)
        report = _kkt(form, x, cfg.kkt_tol, cfg.support_threshold)
        if report.stationary and report.exterior_violation <= cfg.kkt_tol:
            return x, True
        # tighten and retry once from the cleaned point
        x, _ = _ascend(form, x, mask, cfg.tol, cfg.max_iters)
    return _clean(x, cfg.support_threshold), False


def _kkt(form, x, tol, threshold):
    g = form.gradient(x)
    inside = x > threshold
    support = np.flatnonzero(inside)
    if support.size:
        top = float(g[support].max())
        residual = top - float(g[support].min())
        outside = np.flatnonzero(~inside)
        exterior = max(0.0, float(g[outside].max()) - top) if outside.size else 0.0
    else:
        residual, exterior = 0.0, 0.0
    pairs = covered_pairs(form.hypergraph)
    uncovered = [(int(a) + 1, int(b) + 1) for a, b in combinations(support, 2)
                 if (int(a) + 1, int(b) + 1) not in pairs]
    return KKTReport(residual=residual, exterior_violation=exterior,
                     support=[int(i) + 1 for i in support], uncovered_pairs=uncovered,
                     stationary=residual <= tol)


def kkt_check(hypergraph, alpha, x, tol=1e-8, support_threshold=1e-9):
    """Stationarity across the support and pairwise edge coverage of the support."""
    x = as_weighting(x, hypergraph.n)
    return _kkt(LagrangianForm(hypergraph, alpha), x, tol, support_threshold)


def _starts(hypergraph, cfg):
    n = hypergraph.n
    starts = [np.full(n, 1.0 / n)]
    if cfg.max_clique_starts:
        for clique in maximum_cliques(hypergraph, hypergraph.edge_types, limit=cfg.max_clique_starts):
            starts.append(characteristic_vector(clique, n))
        for edge in hypergraph.sorted_edges()[::-1][:cfg.max_clique_starts]:
            starts.append(characteristic_vector(edge, n))
    rng = np.random.default_rng(cfg.seed)
    starts.extend(rng.dirichlet(np.ones(n)) for _ in range(cfg.starts))
    unique, seen = [], set()
    for x in starts:
        marker = x.tobytes()
        if marker not in seen:
            seen.add(marker)
            unique.append(x)
    return unique


def select_best(candidates, value_tol):
    """Deterministic reduction over (value, weighting) pairs: the largest value
    up to value_tol, then the smallest support, then the lexicographically
    largest weighting."""
    top = max(value for value, _ in candidates)
    pool = [(value, x) for value, x in candidates if value >= top - value_tol]
    return min(pool, key=lambda item: (int(np.count_nonzero(item[1])), tuple(-item[1])))


def _trivial_optimum(hypergraph):
    n = hypergraph.n
    return Optimum(value=0.0, weighting=[1.0 / n] * n, support=list(range(1, n + 1)),
                   kkt_residual=0.0, starts_used=0, converged=True)


def build_optimum(form, x, starts_used, cfg):
    report = _kkt(form, x, cfg.kkt_tol, cfg.support_threshold)
    converged = report.stationary and report.exterior_violation <= cfg.kkt_tol
    return Optimum(value=form.value(x), weighting=[float(v) for v in x], support=report.support,
                   kkt_residual=report.residual, starts_used=starts_used, converged=converged)


def optimize(hypergraph, alpha, cfg=None):
    """Multi-start projected gradient ascent followed by a Newton polish on the support."""
    cfg = cfg or SolverConfig()
    if hypergraph.n == 0:
        raise PreconditionError("cannot optimize over an empty vertex set")
    form = LagrangianForm(hypergraph, alpha)
    if not hypergraph.edges:
        return _trivial_optimum(hypergraph)
    mask = np.ones(hypergraph.n, dtype=bool)
    starts = _starts(hypergraph, cfg)
    results = execute_all(lambda x0: _local_solve(form, x0, mask, cfg), starts, cfg.threads)
    candidates = [(form.value(x), x) for x, _ in results]
    _, best = select_best(candidates, cfg.value_tol)
    optimum = build_optimum(form, best, len(starts), cfg)
    if not optimum.converged:
        logger.warning("no start reached KKT tolerance %g (residual %g)", cfg.kkt_tol, optimum.kkt_residual)
    logger.debug("optimize n=%d levels=%s -> %.12g from %d starts",
                 hypergraph.n, hypergraph.level_counts, optimum.value, len(starts))
    return optimum


def support_minimize(hypergraph, alpha, optimum, cfg=None):
    """Shrink the support while keeping the value, merging the weight of an
    uncovered support pair onto one of its vertices and re-ascending on the
    smaller face, until every support pair lies in a common edge."""
    cfg = cfg or SolverConfig()
    form = LagrangianForm(hypergraph, alpha)
    x = _clean(optimum.x, cfg.support_threshold)
    start_value = form.value(x)
    pairs = covered_pairs(hypergraph)
    while True:
        support = [int(i) + 1 for i in np.flatnonzero(x > cfg.support_threshold)]
        uncovered = next(((a, b) for a, b in combinations(support, 2) if (a, b) not in pairs), None)
        if uncovered is None:
            break
        a, b = uncovered[0] - 1, uncovered[1] - 1
        g = form.gradient(x)
        keep, drop = (a, b) if g[a] >= g[b] else (b, a)
        x = x.copy()
        x[keep] += x[drop]
        x[drop] = 0.0
        mask = x > cfg.support_threshold
        x, _ = _ascend(form, x, mask, cfg.tol, cfg.max_iters)
        y = _polish(form, x, cfg)
        if form.value(y) >= form.value(x) - 1e-13:
            x = y
        x = _clean(x, cfg.support_threshold)
    result = build_optimum(form, x, optimum.starts_used, cfg)
    if result.value < start_value - cfg.value_tol:
        logger.warning("support minimization lost value: %.12g -> %.12g", start_value, result.value)
    return result


def compression_monotonicity_check(hypergraph, alpha, x, i, j):
    """L(H, x) <= L(C_(i<-j)(H), x) whenever x_i >= x_j."""
    x = as_weighting(x, hypergraph.n)
    if i >= j:
        raise PreconditionError(f"need i < j, got i={i}, j={j}")
    if x[i - 1] < x[j - 1]:
        raise PreconditionError(f"need x_{i} >= x_{j}")
    before = evaluate(hypergraph, alpha, x)
    after = evaluate(compress_set(hypergraph, i, j), alpha, x)
    return after >= before - MONOTONICITY_SLACK


def link_value(hypergraph, alpha, x, sets):
    """sum_r alpha_r * sum_{A in sets[r]} prod_{v in A} x_v"""
    coefficients = alpha.resolve(hypergraph.edge_types)
    x = np.asarray(x, dtype=float)
    total = 0.0
    for r, members in sets.items():
        for a in members:
            # the empty set (level-1 link) contributes its coefficient alone
            product = float(np.prod(x[np.array(a, dtype=np.intp) - 1])) if a else 1.0
            total += coefficients[r] * product
    return total


def pair_identity_residual(hypergraph, alpha, x, i, j):
    """|(x_i - x_j) L(E_ij, x) - L(E_i\\j, x)|; zero at stationary points of left-compressed H."""
    links = link_sets(hypergraph, i, j)
    pair = link_value(hypergraph, alpha, x, links.pair_links)
    exclusive = link_value(hypergraph, alpha, x, links.exclusive_links)
    return abs((x[i - 1] - x[j - 1]) * pair - exclusive)


class PairIdentity(BaseModel):
    i: int
    j: int
    residual: float
    exclusive_empty: bool
    weight_gap: float


def pair_identity_report(hypergraph, alpha, x, support_threshold=1e-9):
    """Pair identity residuals over the support of x. When E_i\\j is empty the
    identity forces x_i = x_j, so weight_gap should vanish there."""
    x = as_weighting(x, hypergraph.n)
    support = [v for v in hypergraph.vertices if x[v - 1] > support_threshold]
    report = []
    for i, j in combinations(support, 2):
        links = link_sets(hypergraph, i, j)
        exclusive_empty = not any(links.exclusive_links.values())
        report.append(PairIdentity(
            i=i, j=j,
            residual=pair_identity_residual(hypergraph, alpha, x, i, j),
            exclusive_empty=exclusive_empty,
            weight_gap=abs(x[i - 1] - x[j - 1]),
        ))
    return report


def compress_toward_extremal(hypergraph, alpha, x):
    """Relabel by nonincreasing weight and left-compress; the value at the
    sorted weighting does not drop."""
    relabeled, sorted_x = relabel_by_weight(hypergraph, list(x))
    compressed = left_compress_fixpoint(relabeled)
    return compressed, np.array(sorted_x)
