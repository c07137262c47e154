from math import comb

from utils.errors import PreconditionError
from utils.hypergraph import edge_type_set


def count_complete_edges(types, t):
    """|K_t^T| = sum_r C(t, r)"""
    return sum(comb(t, r) for r in edge_type_set(types))


def colex_range(types, t):
    """m-window where L(C_{m,T}) = L([t]^T): sum C(t,r) <= m <= sum C(t,r) + sum C(t-1,r-1)."""
    types = edge_type_set(types)
    if 1 in types:
        raise PreconditionError("the colex window is stated for types without level 1")
    if t < 1:
        raise PreconditionError(f"t must be at least 1, got {t}")
    lo = count_complete_edges(types, t)
    return lo, lo + sum(comb(t - 1, r - 1) for r in types)


def connection_range(types, t):
    """Inclusive m-window t + sum C(t,r) < m <= t + 1 + sum C(t+1,r) over r in Q = T minus {1}."""
    q = tuple(r for r in edge_type_set(types) if r != 1)
    if not q:
        raise PreconditionError("need at least one level besides 1")
    if t < 1:
        raise PreconditionError(f"t must be at least 1, got {t}")
    return t + 1 + sum(comb(t, r) for r in q), t + 1 + sum(comb(t + 1, r) for r in q)


def find_connection_t(types, m):
    """The t whose connection window holds m, or None."""
    t = 1
    while True:
        lo, hi = connection_range(types, t)
        if lo > m:
            return None
        if m <= hi:
            return t
        t += 1


def find_colex_t(types, m):
    t = 1
    while True:
        lo, hi = colex_range(types, t)
        if lo > m:
            return None
        if m <= hi:
            return t
        t += 1


def default_vertex_bound(types, m):
    """(smallest t with sum C(t,r) >= m) + 1"""
    types = edge_type_set(types)
    if m < 1:
        raise PreconditionError(f"m must be at least 1, got {m}")
    t = types[-1]
    while count_complete_edges(types, t) < m:
        t += 1
    return t + 1
