import pytest
from conftest import edges

from utils.errors import AlphaError, HypergraphFormatError, PreconditionError
from utils.hypergraph import Hypergraph, colex_first_m, complete
from utils.hypergraph_parser import (
    format_hypergraph, parse_alpha, parse_edge_types, parse_hypergraph, read_hypergraph, write_hypergraph,
)


def test_parse_hypergraph():
    text = "# a comment\n\nvertices 4\n1 2 3\n1 2 4\n# another\n3\n"
    h = parse_hypergraph(text)
    assert h.n == 4
    assert h.edges == frozenset(edges('123', '124', '3'))


def test_parse_empty_edge_set():
    assert parse_hypergraph("vertices 3\n") == Hypergraph.empty(3)


@pytest.mark.parametrize("text, line", [
    ("1 2\nvertices 3\n", 1),
    ("vertices x\n", 1),
    ("vertices 3\n1 2\n2 1\n", 3),
    ("vertices 3\n1 1\n", 2),
    ("vertices 3\n# ok\n1 4\n", 3),
    ("vertices 3\n1 2\n1 2\n", 3),
    ("vertices 3\n1 b\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(HypergraphFormatError) as info:
        parse_hypergraph(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_header():
    with pytest.raises(HypergraphFormatError) as info:
        parse_hypergraph("# only comments\n")
    assert info.value.line is None


def test_format_hypergraph_orders_levels_then_colex():
    h = Hypergraph.from_edges(4, edges('234', '12', '3', '123', '1'))
    assert format_hypergraph(h) == "vertices 4\n1\n3\n1 2\n1 2 3\n2 3 4\n"


def test_format_hypergraph_comments():
    text = format_hypergraph(complete((2,), 2), comments=["note"])
    assert text == "# note\nvertices 2\n1 2\n"


@pytest.mark.parametrize("types, m", [((3,), 4), ((1, 3), 4), ((2,), 1), ((1, 2, 3), 11), ((2, 4), 9)])
def test_colex_text_round_trip(types, m):
    h = colex_first_m(types, m)
    assert parse_hypergraph(format_hypergraph(h)) == h


def test_read_and_write(tmp_path):
    h = complete((1, 3), 4)
    path = tmp_path / "k4.txt"
    write_hypergraph(h, path)
    assert read_hypergraph(path) == h
    assert path.read_bytes().endswith(b"\n")
    assert b"\r" not in path.read_bytes()


def test_parse_edge_types():
    assert parse_edge_types("1,3") == (1, 3)
    assert parse_edge_types("3") == (3,)
    assert parse_edge_types("3, 1") == (1, 3)
    with pytest.raises(PreconditionError):
        parse_edge_types("a")
    with pytest.raises(PreconditionError):
        parse_edge_types("0,2")


def test_parse_alpha():
    assert parse_alpha(["2=1", "3=0.5"]) == {2: 1.0, 3: 0.5}
    assert parse_alpha([]) == {}
    with pytest.raises(AlphaError):
        parse_alpha(["2"])
    with pytest.raises(AlphaError):
        parse_alpha(["x=1"])
    with pytest.raises(AlphaError):
        parse_alpha(["2=1", "2=0.5"])
