"""Round-trips and error reporting for the .lie / .graph text formats."""

import pytest

from lieforge.catalog import (
    GraphSpec,
    abelian,
    aff1,
    catalog_names,
    graph_algebra,
    heisenberg,
    named,
)
from lieforge.core import invariant_vector
from lieforge.errors import ParseError
from lieforge.hall import free_nilpotent
from lieforge.lieio import emit_graph, emit_lie, parse_graph, parse_lie
from lieforge.linalg import vector


def test_parse_simple_heisenberg():
    L = parse_lie("dim 3\n[1,2] = 1*3\n")
    assert L.table == heisenberg(1).table


def test_parse_aff1():
    L = parse_lie("dim 2\n[1,2] = 1*2\n")
    assert L.table == aff1().table
    assert invariant_vector(L) == invariant_vector(aff1())


def test_parse_rejects_diagonal_pair():
    with pytest.raises(ParseError, match="diagonal pair"):
        parse_lie("dim 2\n[1,1] = 1*2\n")


def test_parse_rejects_swapped_pair():
    with pytest.raises(ParseError, match="1 <= i < j"):
        parse_lie("dim 3\n[2,1] = 1*3\n")


def test_parse_rejects_duplicates_and_range():
    with pytest.raises(ParseError, match="duplicate pair"):
        parse_lie("dim 3\n[1,2] = 1*3\n[1,2] = 2*3\n")
    with pytest.raises(ParseError, match="out of range"):
        parse_lie("dim 3\n[1,2] = 1*4\n")
    with pytest.raises(ParseError, match="malformed"):
        parse_lie("dim 3\n[1,2] = 1.5*3\n")
    with pytest.raises(ParseError, match="missing dim"):
        parse_lie("# nothing\n")


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as err:
        parse_lie("dim 3\n# fine\n[1,2] = bogus\n")
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_parse_signs_fractions_and_comments():
    text = """
# a comment
dim 3
basis u v w
[1,2] = 1/2*1 + -1*3   # inline comment
[1,3] = 2*2 - 3/4*3
"""
    L = parse_lie(text)
    assert L.bracket_basis(0, 1) == vector(["1/2", 0, -1])
    assert L.bracket_basis(0, 2) == vector([0, 2, "-3/4"])
    assert L.names == ("u", "v", "w")


def test_roundtrip_catalog():
    algebras = [named(n) for n in catalog_names()]
    algebras += [heisenberg(2), abelian(4), free_nilpotent(2, 3),
                 graph_algebra(GraphSpec(3, ((1, 2), (2, 3))))]
    for L in algebras:
        text = emit_lie(L)
        again = parse_lie(text)
        assert again.table == L.table
        assert again.names == L.names
        assert emit_lie(again) == text


def test_emit_canonical_form():
    text = emit_lie(heisenberg(1))
    assert text == "dim 3\nbasis x1 y1 z\n[1,2] = 1*3\n"


def test_parse_emit_parse_is_parse():
    text = "dim 4\n[1,2] = 2*3 + 1*4\n[3,4] = -1/3*1\n"
    once = parse_lie(text)
    assert parse_lie(emit_lie(once)).table == once.table


def test_graph_roundtrip():
    g = GraphSpec(4, ((1, 2), (1, 3), (2, 4)))
    assert parse_graph(emit_graph(g)) == g


def test_graph_parse_errors():
    with pytest.raises(ParseError, match="vertices"):
        parse_graph("edge 1 2\n")
    with pytest.raises(ParseError, match="1 <= i < j"):
        parse_graph("vertices 3\nedge 2 1\n")
    with pytest.raises(ParseError, match="duplicate edge"):
        parse_graph("vertices 3\nedge 1 2\nedge 1 2\n")


def test_zero_value_lines_allowed():
    L = parse_lie("dim 3\n[1,2] = 0\n")
    assert not L.table
