import logging

from utils.errors import AlphaError, HypergraphFormatError, InvalidEdgeError, PreconditionError
from utils.hypergraph import Hypergraph, edge_type_set

logger = logging.getLogger(__name__)

# Text format:
#   # comment
#   vertices N
#   1 2 3      <- one edge per line, increasing vertex indices
HEADER = 'vertices'


def parse_hypergraph(text):
    n = None
    edges = []
    seen = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if n is None:
            if tokens[0] != HEADER or len(tokens) != 2:
                raise HypergraphFormatError(f"expected '{HEADER} N', got {line!r}", number)
            n = _parse_int(tokens[1], number)
            if n < 0:
                raise HypergraphFormatError("vertex count must be nonnegative", number)
            continue
        edge = tuple(_parse_int(token, number) for token in tokens)
        if any(b <= a for a, b in zip(edge, edge[1:])):
            raise HypergraphFormatError(f"edge {line!r} is not strictly increasing", number)
        if edge[0] < 1 or edge[-1] > n:
            raise HypergraphFormatError(f"edge {line!r} leaves the vertex range [1, {n}]", number)
        if edge in seen:
            raise HypergraphFormatError(f"duplicate edge {line!r} (first on line {seen[edge]})", number)
        seen[edge] = number
        edges.append(edge)
    if n is None:
        raise HypergraphFormatError(f"missing '{HEADER} N' header")
    try:
        return Hypergraph.from_edges(n, edges)
    except InvalidEdgeError as e:
        raise HypergraphFormatError(str(e)) from e


def _parse_int(token, number):
    try:
        return int(token)
    except ValueError:
        raise HypergraphFormatError(f"expected an integer, got {token!r}", number) from None


def read_hypergraph(path):
    with open(path, encoding='utf-8') as f:
        hypergraph = parse_hypergraph(f.read())
    logger.info("read %s: n=%d, levels=%s", path, hypergraph.n, hypergraph.level_counts)
    return hypergraph


def format_hypergraph(hypergraph, comments=()):
    lines = [f"# {c}" for c in comments]
    lines.append(f"{HEADER} {hypergraph.n}")
    lines.extend(' '.join(str(v) for v in edge) for edge in hypergraph.sorted_edges())
    return '\n'.join(lines) + '\n'


def write_hypergraph(hypergraph, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(format_hypergraph(hypergraph))


def parse_edge_types(text):
    """'1,3' -> (1, 3)"""
    try:
        values = [int(part) for part in text.replace(' ', '').split(',') if part]
    except ValueError:
        raise PreconditionError(f"bad edge-type list {text!r}; expected e.g. 1,3") from None
    return edge_type_set(values)


def parse_alpha(specs):
    """['2=1', '3=0.5'] -> {2: 1.0, 3: 0.5}"""
    coefficients = {}
    for spec in specs:
        level, sep, value = spec.partition('=')
        if not sep:
            raise AlphaError(f"bad alpha {spec!r}; expected r=value")
        try:
            r, coefficient = int(level), float(value)
        except ValueError:
            raise AlphaError(f"bad alpha {spec!r}; expected r=value") from None
        if r in coefficients:
            raise AlphaError(f"alpha for level {r} given twice")
        coefficients[r] = coefficient
    return coefficients
