"""Non-uniform hypergraphs on [n] and the combinatorial constructions used by
the Lagrangian machinery: colex order, complete graphs, induced subgraphs,
left-compression, cliques, links and level-1 isolated vertices.

Vertices are the integers 1..n. An edge is a strictly increasing tuple of
vertices; edges of the same cardinality form a level.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from types import MappingProxyType
from typing import NamedTuple

from utils.errors import InvalidEdgeError, PreconditionError

logger = logging.getLogger(__name__)


def edge_type_set(types):
    """Validate an edge-type set and return it as a strictly increasing tuple."""
    values = tuple(sorted(set(int(r) for r in types)))
    if not values:
        raise PreconditionError("edge-type set must be nonempty")
    if values[0] < 1:
        raise PreconditionError(f"edge types must be positive, got {values}")
    return values


def colex_key(edge):
    # A < B in colex iff max(A ^ B) lies in B iff sum 2^a < sum 2^b
    return sum(1 << v for v in edge)


def colex_less(a, b):
    a, b = frozenset(a), frozenset(b)
    if a == b:
        raise PreconditionError("colex order compares distinct sets only")
    return max(a ^ b) in b


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: frozenset
    _levels: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidEdgeError(f"vertex count must be nonnegative, got {self.n}")
        levels = {}
        for edge in self.edges:
            if not edge:
                raise InvalidEdgeError("edges must contain at least one vertex")
            if any(b <= a for a, b in zip(edge, edge[1:])):
                raise InvalidEdgeError(f"edge {edge} is not strictly increasing")
            if edge[0] < 1 or edge[-1] > self.n:
                raise InvalidEdgeError(f"edge {edge} leaves the vertex range [1, {self.n}]")
            levels.setdefault(len(edge), []).append(edge)
        ordered = {r: tuple(sorted(levels[r], key=colex_key)) for r in sorted(levels)}
        object.__setattr__(self, '_levels', MappingProxyType(ordered))

    @classmethod
    def from_edges(cls, n, edges):
        canonical = []
        for edge in edges:
            vertices = tuple(sorted(int(v) for v in edge))
            if len(set(vertices)) != len(vertices):
                raise InvalidEdgeError(f"edge {tuple(edge)} repeats a vertex")
            canonical.append(vertices)
        unique = frozenset(canonical)
        if len(unique) != len(canonical):
            raise InvalidEdgeError("duplicate edges are not allowed")
        return cls(int(n), unique)

    @classmethod
    def empty(cls, n=0):
        return cls(n, frozenset())

    @property
    def levels(self):
        return self._levels

    @property
    def edge_types(self):
        return tuple(self._levels)

    @property
    def level_counts(self):
        return {r: len(edges) for r, edges in self._levels.items()}

    @property
    def vertices(self):
        return range(1, self.n + 1)

    @property
    def used_vertices(self):
        return frozenset(v for edge in self.edges for v in edge)

    def level(self, r):
        return self._levels.get(r, ())

    def sorted_edges(self):
        return [edge for edges in self._levels.values() for edge in edges]

    def __len__(self):
        return len(self.edges)

    def __contains__(self, edge):
        return tuple(edge) in self.edges


class Induced(NamedTuple):
    hypergraph: Hypergraph
    relabel: dict


@dataclass(frozen=True)
class LinkSets:
    """Links of a vertex i (and of the pair i, j) per level r.

    links[r] = E_i^r, pair_links[r] = E_ij^r, exclusive_links[r] = E_i\\j^r;
    the complements are taken inside [n].
    """

    vertex: int
    other: int | None
    links: dict
    complements: dict
    pair_links: dict
    pair_complements: dict
    exclusive_links: dict


def colex_first_m(types, m):
    """C_{m,T}: the first m sets in colex order among sets with sizes in T."""
    types = edge_type_set(types)
    if m < 1:
        raise PreconditionError(f"m must be at least 1, got {m}")
    # subsets of [N] form a colex initial segment, so grow N until m fit
    horizon = 1
    while sum(comb(horizon, r) for r in types) < m:
        horizon += 1
    candidates = [c for r in types for c in combinations(range(1, horizon + 1), r)]
    candidates.sort(key=colex_key)
    chosen = candidates[:m]
    return Hypergraph.from_edges(max(edge[-1] for edge in chosen), chosen)


def complete(types, n):
    types = edge_type_set(types)
    if n < types[-1]:
        raise PreconditionError(f"K_n^T needs n >= max(T) = {types[-1]}, got n = {n}")
    return Hypergraph.from_edges(n, [c for r in types for c in combinations(range(1, n + 1), r)])


def complete_up_to(r, n):
    """K_n^{[r]}: every nonempty subset of [n] with at most r vertices."""
    return complete(range(1, r + 1), n)


def induced(hypergraph, subset):
    """H[W] relabeled onto 1..|W| in increasing order of the original labels."""
    members = sorted(set(subset))
    if members and (members[0] < 1 or members[-1] > hypergraph.n):
        raise PreconditionError(f"vertex set {members} is not inside [1, {hypergraph.n}]")
    relabel = {v: k + 1 for k, v in enumerate(members)}
    edges = [tuple(relabel[v] for v in edge) for edge in hypergraph.edges
             if all(v in relabel for v in edge)]
    return Induced(Hypergraph.from_edges(len(members), edges), relabel)


def restrict_levels(hypergraph, types):
    """H^Q: keep only the levels in Q, on the same vertex set."""
    keep = set(types)
    return Hypergraph(hypergraph.n, frozenset(e for e in hypergraph.edges if len(e) in keep))


def is_subgraph(small, large):
    return small.n <= large.n and small.edges <= large.edges


def isolated_vertices(hypergraph):
    """D(H): level-1 vertices lying in no edge of cardinality >= 2."""
    singles = {edge[0] for edge in hypergraph.level(1)}
    covered = {v for edge in hypergraph.edges if len(edge) >= 2 for v in edge}
    return frozenset(singles - covered)


def covered_pairs(hypergraph):
    return frozenset(pair for edge in hypergraph.edges if len(edge) >= 2
                     for pair in combinations(edge, 2))


def compress_edge(edge, i, j):
    if i >= j:
        raise PreconditionError(f"compression C_(i<-j) needs i < j, got i={i}, j={j}")
    if i not in edge and j in edge:
        return tuple(sorted((set(edge) - {j}) | {i}))
    return tuple(edge)


def compress_set(hypergraph, i, j):
    """Apply C_(i<-j) to every level; the edge count is preserved."""
    if i >= j:
        raise PreconditionError(f"compression C_(i<-j) needs i < j, got i={i}, j={j}")
    if j > hypergraph.n:
        raise PreconditionError(f"vertex {j} is outside [1, {hypergraph.n}]")
    edges = hypergraph.edges
    images = {compress_edge(e, i, j) for e in edges}
    kept = {e for e in edges if compress_edge(e, i, j) in edges}
    return Hypergraph(hypergraph.n, frozenset(images | kept))


def is_left_compressed(hypergraph):
    # closure under single moves v -> v-1 generates the coordinatewise dominance order
    edges = hypergraph.edges
    for edge in edges:
        present = set(edge)
        for p, v in enumerate(edge):
            if v > 1 and v - 1 not in present:
                if edge[:p] + (v - 1,) + edge[p + 1:] not in edges:
                    return False
    return True


def left_compress_fixpoint(hypergraph):
    current = hypergraph
    n = hypergraph.n
    steps = 0
    changed = True
    while changed:
        changed = False
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                shifted = compress_set(current, i, j)
                if shifted != current:
                    current = shifted
                    changed = True
                    steps += 1
                    break
            if changed:
                break
    logger.debug("left compression reached a fixpoint after %d steps", steps)
    return current


def relabel_by_weight(hypergraph, weights):
    """Relabel vertices so that weights become nonincreasing (ties keep order)."""
    if len(weights) != hypergraph.n:
        raise PreconditionError(f"weighting has length {len(weights)}, expected {hypergraph.n}")
    order = sorted(range(hypergraph.n), key=lambda k: (-weights[k], k))
    relabel = {old + 1: new + 1 for new, old in enumerate(order)}
    edges = [tuple(relabel[v] for v in edge) for edge in hypergraph.edges]
    return Hypergraph.from_edges(hypergraph.n, edges), [weights[k] for k in order]


def _compatible(edges, types, current, v):
    for r in types:
        if r - 1 > len(current):
            continue
        for rest in combinations(current, r - 1):
            if rest + (v,) not in edges:
                return False
    return True


def _colour_bound(edges, types, current, pool):
    """Greedy colouring of pool, where u and a later v clash when current + u
    accepts v. Any clique extending current takes distinct colours."""
    classes = []
    for v in pool:
        for members in classes:
            if not any(_compatible(edges, types, current + (u,), v) for u in members):
                members.append(v)
                break
        else:
            classes.append([v])
    return len(classes)


def _clique_search(hypergraph, types, collect, limit):
    types = edge_type_set(types)
    edges = hypergraph.edges
    floor = types[0]
    candidates = [v for v in hypergraph.vertices if 1 not in types or (v,) in edges]
    best = floor - 1
    found = []

    def hopeless(reach):
        return reach < best or (not collect and reach <= best)

    def extend(current, pool):
        nonlocal best, found
        size = len(current)
        if size > best:
            best, found = size, [current]
        elif collect and size == best and size >= floor and (limit is None or len(found) < limit):
            found.append(current)
        if not pool or hopeless(size + _colour_bound(edges, types, current, pool)):
            return
        for idx, v in enumerate(pool):
            if hopeless(size + len(pool) - idx):
                break
            if _compatible(edges, types, current, v):
                extend(current + (v,), pool[idx + 1:])

    extend((), candidates)
    if best < floor:
        return 0, []
    return best, found


def max_clique_order(hypergraph, types):
    """Largest t such that some t-set W has every subset of size in Q as an edge.

    Cliques must reach min(Q) vertices; 0 means no such set exists.
    """
    order, _ = _clique_search(hypergraph, types, collect=False, limit=None)
    return order


def maximum_cliques(hypergraph, types, limit=None):
    _, cliques = _clique_search(hypergraph, types, collect=True, limit=limit)
    return cliques


def link_sets(hypergraph, i, j=None):
    n = hypergraph.n
    if not 1 <= i <= n or (j is not None and not 1 <= j <= n):
        raise PreconditionError(f"link vertices must lie in [1, {n}]")
    if i == j:
        raise PreconditionError("pair links need two distinct vertices")
    links, complements, pair_links, pair_complements, exclusive = {}, {}, {}, {}, {}
    others = [v for v in hypergraph.vertices if v != i]
    for r, level in hypergraph.levels.items():
        level_set = set(level)
        links[r] = frozenset(tuple(v for v in e if v != i) for e in level if i in e)
        complements[r] = frozenset(a for a in combinations(others, r - 1)
                                   if tuple(sorted(a + (i,))) not in level_set)
        if j is None:
            continue
        if r >= 2:
            pair_links[r] = frozenset(tuple(v for v in e if v not in (i, j))
                                      for e in level if i in e and j in e)
            rest = [v for v in others if v != j]
            pair_complements[r] = frozenset(b for b in combinations(rest, r - 2)
                                            if tuple(sorted(b + (i, j))) not in level_set)
        else:
            pair_links[r] = frozenset()
            pair_complements[r] = frozenset()
        exclusive[r] = frozenset(a for a in links[r]
                                 if j not in a and tuple(sorted(a + (j,))) not in level_set)
    return LinkSets(i, j, links, complements, pair_links, pair_complements, exclusive)
