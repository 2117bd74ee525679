import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES, graphs
from wgcalc.examples import EXAMPLES, split_branch_diagram
from wgcalc.formats import (
    FormatError,
    diagram_from_dict,
    diagram_to_dict,
    dump_sequence,
    format_graph,
    load_sequence,
    parse,
    sequence_from_dict,
    sequence_to_dict,
    to_dot,
    to_shorthand,
)
from wgcalc.generators import random_sequence
from wgcalc.graph import GraphError, canonical_key, chain, cycle
from wgcalc.moves import apply


def test_parse_examples():
    g = parse("((9))")
    assert len(g) == 1 and g.loops("v0") == 1 and g.weight("v0") == 9 and g.is_rational("v0")
    g = parse("[[0,-2,-3]]")
    assert [g.weight(v) for v in ("v0", "v1", "v2")] == [0, -2, -3] and len(g.edges) == 2
    g = parse("[[9*]]")
    assert not g.is_rational("v0")
    assert parse("  [[ 1 , +2 ]] ").weight("v1") == 2


def test_parse_json():
    g = parse('{"vertices":[{"id":"a","w":1},{"id":"b","w":-2,"rational":false}],"edges":[["a","b"],["a","a"]]}')
    assert g.edges == {"e0": ("a", "b"), "e1": ("a", "a")}
    assert not g.is_rational("b")


@pytest.mark.parametrize(
    "text",
    [
        "[[1,2",
        "[[1,,2]]",
        "[[x]]",
        "{",
        '{"edges":[]}',
        '{"vertices":[{"id":"a"}]}',
        '{"vertices":[{"id":"a","w":1.5}]}',
        '{"vertices":[{"id":"a","w":1},{"id":"a","w":2}]}',
        '{"vertices":[{"id":"a","w":1}],"edges":[["a"]]}',
    ],
)
def test_syntax_errors(text):
    with pytest.raises(FormatError):
        parse(text)


def test_syntax_error_positions():
    with pytest.raises(FormatError) as info:
        parse("[[1,x,2]]")
    assert info.value.position == 4
    with pytest.raises(FormatError) as info:
        parse('{"vertices": [}')
    assert info.value.position is not None


def test_dangling_edge_is_a_semantic_error():
    with pytest.raises(GraphError) as info:
        parse('{"vertices":[{"id":"a","w":1}],"edges":[["a","b"]]}')
    assert not isinstance(info.value, FormatError)


@settings(max_examples=300)
@given(graphs())
def test_json_round_trip(g):
    assert parse(format_graph(g, "json")) == g


@settings(max_examples=300)
@given(st.lists(st.tuples(st.integers(-9, 9), st.booleans()), min_size=1, max_size=7), st.booleans())
def test_shorthand_round_trip(ws, circular):
    g = cycle(ws) if circular else chain(ws)
    assert canonical_key(parse(to_shorthand(g))) == canonical_key(g)


def test_round_trip_on_example_library():
    for ex in EXAMPLES:
        g = ex.graph
        assert canonical_key(parse(format_graph(g, "json"))) == canonical_key(g)
        assert canonical_key(parse(format_graph(g, "short"))) == canonical_key(g)


def test_shorthand_needs_a_chain_or_cycle():
    star = parse('{"vertices":[{"id":"c","w":-2},{"id":"a","w":-2},{"id":"b","w":-2},{"id":"d","w":-2}],'
                 '"edges":[["c","a"],["c","b"],["c","d"]]}')
    with pytest.raises(FormatError):
        to_shorthand(star)
    with pytest.raises(FormatError):
        format_graph(star, "xml")


def test_dot_export():
    dot = to_dot(parse('{"vertices":[{"id":"a","w":-1},{"id":"b","w":3,"rational":false}],"edges":[["a","b"]]}'))
    assert dot.startswith("graph G {")
    assert '"a" [label="-1", xlabel="a", shape=circle, style=filled fillcolor="lightgray"];' in dot
    assert '"b" [label="3*", xlabel="b", shape=box];' in dot
    assert '"a" -- "b" [id="e0"];' in dot


@settings(max_examples=200, deadline=None)
@given(graphs(max_vertices=5), st.integers(0, 2**32 - 1))
def test_sequence_json_round_trip(g, seed):
    seq, trace = random_sequence(random.Random(seed), g, 6)
    assert load_sequence(dump_sequence(seq)) == seq
    bare = {"steps": sequence_to_dict(seq)["steps"]}
    assert sequence_from_dict(bare, g) == seq
    assert apply(g, load_sequence(dump_sequence(seq)))[-1] == trace[-1]


def test_sequence_errors():
    with pytest.raises(FormatError):
        load_sequence("[]")
    with pytest.raises(FormatError):
        load_sequence('{"steps":[{"op":"twist"}]}', chain([0]))
    with pytest.raises(FormatError):
        load_sequence('{"steps":[{"op":"blowdown"}]}', chain([0]))
    with pytest.raises(FormatError):
        load_sequence('{"steps":[]}')
    with pytest.raises(FormatError):
        load_sequence('{"start":"zz","steps":[],"fingerprints":[]}')


def test_shipped_fixtures_load():
    for path in sorted(FIXTURES.glob("*.json")):
        seq = load_sequence(path.read_text())
        assert len(seq) > 0, path.name


def test_diagram_round_trip():
    d = split_branch_diagram()
    data = json.loads(json.dumps(diagram_to_dict(d)))
    assert data["p1"]["contracted"] == ["b1", "v", "v1"]
    back = diagram_from_dict(data)
    assert back.top == d.top
    assert back.p1.contracted == d.p1.contracted and back.p2.contracted == d.p2.contracted
    short = {"top": data["top"], "p1": ["v1", "b1", "v"], "p2": {"contracted": ["v2", "b2", "v"]}}
    assert diagram_from_dict(short).p2.contracted == d.p2.contracted
    with pytest.raises(FormatError):
        diagram_from_dict({"top": data["top"]})
