from __future__ import annotations

import pytest
from hypothesis import given, settings

from strategies import dual_graphs
from nodaltails import build_graph
from nodaltails.graph_io import (
    ParseError,
    ValidationError,
    canonical_json,
    graph_to_document,
    load_graph,
    parse_graph_document,
    serialize_graph,
)


def test_parse_examples(g0, g1):
    assert parse_graph_document(b'{"components":2,"edges":[[1,2]]}') == g0
    text = '{"components":4,"edges":[[1,2],[1,2],[1,3],[1,3],[2,4],[3,4]]}'
    assert parse_graph_document(text) == g1


def test_disconnected_is_validation_error():
    with pytest.raises(ValidationError, match="Disconnected") as info:
        parse_graph_document('{"components":3,"edges":[[1,2]]}')
    assert info.value.locus == "edges"


@pytest.mark.parametrize(
    "text, locus",
    [
        ('{"components":2,\n"edges":[[1,2]', "line 2, column 15"),
        ("[]", "document"),
        ('{"edges":[]}', "components"),
        ('{"components":"2","edges":[]}', "components"),
        ('{"components":2,"edges":[[1,2,3]]}', "edges[0]"),
        ('{"components":2,"edges":[[1,2],[1,true]]}', "edges[1]"),
        ('{"components":2,"edges":{}}', "edges"),
        ('{"components":2,"edges":[[1,2]],"colour":1}', "colour"),
        ('{"components":2,"edges":[[1,2]],"labels":[1,2]}', "labels"),
    ],
)
def test_parse_errors_carry_locus(text, locus):
    with pytest.raises(ParseError) as info:
        parse_graph_document(text)
    assert info.value.locus == locus
    assert str(info.value).startswith(locus)


@pytest.mark.parametrize(
    "text, locus",
    [
        ('{"components":0,"edges":[]}', "components"),
        ('{"components":2,"edges":[[1,3]]}', "edges[0]"),
        ('{"components":2,"edges":[[1,2]],"labels":["a"]}', "labels"),
    ],
)
def test_validation_errors_carry_locus(text, locus):
    with pytest.raises(ValidationError) as info:
        parse_graph_document(text)
    assert info.value.locus == locus


def test_invalid_utf8():
    with pytest.raises(ParseError) as info:
        parse_graph_document(b'{"components":\xff}')
    assert info.value.locus == "byte 14"


def test_canonical_form():
    g = build_graph(3, [(3, 2), (1, 2), (1, 1)], labels=["a", "b", "c"])
    assert serialize_graph(g) == b'{"components":3,"edges":[[1,1],[1,2],[2,3]],"labels":["a","b","c"]}'
    assert canonical_json({"b": [1, 2]}) == '{"b":[1,2]}'


def test_loops_and_labels_survive(tmp_path):
    g = build_graph(2, [(1, 2), (2, 2)], labels=["x", "y"])
    path = tmp_path / "g.json"
    path.write_bytes(serialize_graph(g))
    back = load_graph(str(path))
    assert back.labels == ("x", "y") and sorted(back.edges) == [(1, 2), (2, 2)]


@settings(max_examples=60, deadline=None)
@given(dual_graphs(max_p=6))
def test_round_trip_is_byte_identical(g):
    once = serialize_graph(g)
    again = serialize_graph(parse_graph_document(once))
    assert once == again
    assert graph_to_document(parse_graph_document(once)) == graph_to_document(g)
