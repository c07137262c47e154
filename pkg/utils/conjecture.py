"""Desk-scale scans of the colex conjecture: among T-graphs with m edges on at
most n vertices, does C_{m,T} have the largest Lagrangian?

Some extremal graph is left-compressed, so the default scan only visits
left-compressed graphs. Each level of such a graph is a down-set of the
dominance order on r-subsets of [n]; down-sets are grown along colex order,
which extends dominance, adding a set only once all of its lower covers are
present. This yields every down-set exactly once.
"""
import logging
from functools import lru_cache
from itertools import combinations, product
from math import comb

from pydantic import BaseModel
from tqdm import tqdm

from utils.cache import get_optimum
from utils.config import SCAN_LIMIT, SolverConfig
from utils.CountUtil import default_vertex_bound, find_connection_t
from utils.errors import PreconditionError
from utils.executor import execute_all
from utils.hypergraph import Hypergraph, colex_first_m, colex_key, edge_type_set
from utils.hypergraph_parser import format_hypergraph
from utils.lagrangian import AlphaParams
from utils.theorems import COEFFICIENT_SUM, TheoremVerdict, level1_hypothesis

logger = logging.getLogger(__name__)

__all__ = [
    'ScanReport', 'default_vertex_bound', 'enumerate_all', 'enumerate_left_compressed', 'scan',
    'scan_window', 'talbot_range', 'verify_connection',
]

HOLDS_TOL = 1e-7
MAX_WITNESSES = 10
TALBOT_VARIANTS = ('tal', 'tpzz', 'tpzz1')


class ScanReport(BaseModel):
    edge_types: list[int]
    alpha: dict[int, float]
    m: int
    n: int
    extremal_value: float
    colex_value: float
    conjecture_holds: bool
    witnesses: list[str]
    enumerated_count: int
    complete: bool
    left_compressed_only: bool = True
    vertex_bound_note: str = ''


def _check_scan_args(types, m, n):
    types = edge_type_set(types)
    if m < 1:
        raise PreconditionError(f"m must be at least 1, got {m}")
    if n < types[-1]:
        raise PreconditionError(f"need n >= max(T) = {types[-1]}, got n = {n}")
    return types


def _compositions(m, caps):
    """Tuples (k_1..k_L), 1 <= k_i <= caps[i], summing to m."""
    if not caps:
        if m == 0:
            yield ()
        return
    rest = sum(caps[1:])
    for k in range(max(1, m - rest), min(caps[0], m - len(caps) + 1) + 1):
        for tail in _compositions(m - k, caps[1:]):
            yield (k,) + tail


@lru_cache(maxsize=None)
def _universe(r, n):
    return tuple(sorted(combinations(range(1, n + 1), r), key=colex_key))


def _lower_covers(edge):
    present = set(edge)
    return [edge[:p] + (v - 1,) + edge[p + 1:] for p, v in enumerate(edge)
            if v > 1 and v - 1 not in present]


@lru_cache(maxsize=None)
def _down_sets(r, n, k):
    universe = _universe(r, n)
    index = {edge: i for i, edge in enumerate(universe)}
    covers = [[index[c] for c in _lower_covers(edge)] for edge in universe]
    inside = [False] * len(universe)
    chosen = []
    found = []

    def extend(start):
        if len(chosen) == k:
            found.append(tuple(universe[i] for i in chosen))
            return
        for c in range(start, len(universe)):
            if len(universe) - c < k - len(chosen):
                break
            if all(inside[p] for p in covers[c]):
                chosen.append(c)
                inside[c] = True
                extend(c + 1)
                chosen.pop()
                inside[c] = False

    extend(0)
    return tuple(found)


def _assemble(levels):
    edges = [edge for level in levels for edge in level]
    return Hypergraph.from_edges(max(edge[-1] for edge in edges), edges)


def enumerate_left_compressed(types, m, n):
    """Every left-compressed T-graph with m edges inside [n], once each.
    The vertex count of each graph is its largest used vertex."""
    types = _check_scan_args(types, m, n)
    caps = [comb(n, r) for r in types]
    for sizes in _compositions(m, caps):
        choices = [_down_sets(r, n, k) for r, k in zip(types, sizes)]
        for levels in product(*choices):
            yield _assemble(levels)


def enumerate_all(types, m, n):
    """Every T-graph with m edges inside [n], compressed or not."""
    types = _check_scan_args(types, m, n)
    caps = [comb(n, r) for r in types]
    for sizes in _compositions(m, caps):
        choices = [combinations(_universe(r, n), k) for r, k in zip(types, sizes)]
        for levels in product(*choices):
            yield _assemble(levels)


def scan(types, alpha, m, n, cfg=None, limit=None, cross_check=True, progress=False,
         left_compressed_only=True):
    """Extremal L over enumerated T-graphs with m edges on at most n vertices,
    compared against L(C_{m,T})."""
    cfg = cfg or SolverConfig()
    limit = SCAN_LIMIT if limit is None else limit
    types = _check_scan_args(types, m, n)
    alpha = alpha.anchored_to(types)
    source = enumerate_left_compressed if left_compressed_only else enumerate_all

    graphs = []
    complete = True
    for hypergraph in source(types, m, n):
        if len(graphs) >= limit:
            complete = False
            logger.warning("scan stopped at the enumeration limit of %d graphs", limit)
            break
        graphs.append(hypergraph)
    logger.info("scanning %d graphs (T=%s, m=%d, n=%d)", len(graphs), types, m, n)

    items = tqdm(graphs, desc=f"m={m} n={n}", disable=not progress)
    optima = execute_all(lambda h: get_optimum(h, alpha, cfg, cross_check), items, cfg.threads)

    colex = colex_first_m(types, m)
    colex_value = get_optimum(colex, alpha, cfg, cross_check).value
    extremal = max((o.value for o in optima), default=0.0)
    witnesses = [format_hypergraph(h) for h, o in zip(graphs, optima) if o.value >= extremal - HOLDS_TOL]
    note = f"graphs on at most {n} vertices"
    if colex.n > n:
        note += f"; C_(m,T) needs {colex.n} vertices and is not among the candidates"

    return ScanReport(edge_types=list(types), alpha=dict(alpha.coefficients), m=m, n=n,
                      extremal_value=extremal, colex_value=colex_value,
                      conjecture_holds=extremal <= colex_value + HOLDS_TOL,
                      witnesses=witnesses[:MAX_WITNESSES], enumerated_count=len(graphs),
                      complete=complete, left_compressed_only=left_compressed_only,
                      vertex_bound_note=note)


def talbot_range(r, t, variant):
    """Inclusive m-window of a known colex result; fractional ends are floored."""
    if variant not in TALBOT_VARIANTS:
        raise PreconditionError(f"unknown variant {variant!r}; expected one of {', '.join(TALBOT_VARIANTS)}")
    if variant in ('tal', 'tpzz') and r != 3:
        raise PreconditionError(f"variant {variant} is stated for r = 3, got r = {r}")
    if t < r:
        raise PreconditionError(f"need t >= r, got t = {t}, r = {r}")
    if variant == 'tal':
        lo, hi = comb(t, 3) - 2, comb(t, 3) + comb(t - 1, 2) - t
    elif variant == 'tpzz':
        # floor(C(t,3) + C(t-1,2) - t/2)
        lo, hi = comb(t, 3) - 7, comb(t, 3) + comb(t - 1, 2) - (t + 1) // 2
    else:
        lo, hi = comb(t, r) - 4, comb(t, r)
    return max(lo, 1), hi


def scan_window(r, t, variant, alpha=None, cfg=None, **kwargs):
    """Scan every m of a talbot_range window at the vertex bound the result uses."""
    alpha = alpha or AlphaParams()
    lo, hi = talbot_range(r, t, variant)
    n = t if variant == 'tpzz1' else t + 1
    return [scan((r,), alpha, m, n, cfg, **kwargs) for m in range(lo, hi + 1)]


def verify_connection(types, alpha, m, n, cfg=None, t=None, **kwargs):
    """Scan-based check of L(H) <= L(C_{m,T}) for T containing level 1, after
    establishing the premise on Q = T minus {1} with m - t - 1 edges."""
    cfg = cfg or SolverConfig()
    types = edge_type_set(types)
    if 1 not in types or len(types) < 2:
        raise PreconditionError("connection needs level 1 and at least one higher level")
    q = tuple(r for r in types if r != 1)
    notes = []
    gate = level1_hypothesis(types, alpha)
    if not gate.ok:
        notes.append(f"hypothesis failed: {COEFFICIENT_SUM}")
    t = t or find_connection_t(types, m)
    details = {'t': t}
    premise_holds = True
    if t is None:
        notes.append(f"m = {m} lies in no connection window")
    else:
        m_q = m - t - 1
        if m_q >= 1 and n >= q[-1]:
            premise = scan(q, alpha.restricted(q).unanchored(), m_q, n, cfg, **kwargs)
            premise_holds = premise.conjecture_holds and premise.complete
            details.update(premise_extremal=premise.extremal_value, premise_colex=premise.colex_value)
    details['premise_holds'] = premise_holds
    if not premise_holds:
        notes.append("premise failed: a Q-graph with m - t - 1 edges beats the colex graph")

    report = scan(types, alpha, m, n, cfg, **kwargs)
    details.update(conjecture_holds=report.conjecture_holds, enumerated_count=report.enumerated_count,
                   complete=report.complete)
    hypothesis_ok = gate.ok and t is not None and premise_holds
    return TheoremVerdict(theorem_id='connection-scan', hypothesis_ok=hypothesis_ok,
                          predicted=report.colex_value, computed=report.extremal_value,
                          abs_error=abs(report.extremal_value - report.colex_value),
                          details=details, notes=notes)
