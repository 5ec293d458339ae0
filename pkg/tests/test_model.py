import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CYCLE_JSON, make_cycle
from provapt.generators import generate_random
from provapt.model import (
    LABELS,
    ParseError,
    ProvDocument,
    ProvNode,
    RelationLabel,
    document_to_json,
    dump_document,
    infer_core_types,
    parse_document,
)


def test_thirteen_labels_with_signatures():
    assert len(LABELS) == 13
    assert [lab.value for lab in LABELS] == [
        "used", "wgb", "wdf", "waw", "wat", "aobo", "wib", "wsb", "web", "wifb", "mem", "spec", "alt",
    ]
    assert RelationLabel.USED.signature == ("Activity", "Entity")
    assert RelationLabel.WAT.signature == ("Entity", "Agent")
    assert RelationLabel.AOBO.signature == ("Agent", "Agent")
    assert RelationLabel.WIFB.signature == ("Activity", "Activity")
    with pytest.raises(ValueError):
        RelationLabel.parse("wasInfluencedBy")


def test_single_entity():
    doc = parse_document('{"entity": {"ex:e1": {}}}')
    assert doc.node_ids == ("ex:e1",)
    assert doc.nodes["ex:e1"].core_types == {"Entity"}
    assert not doc.edges


def test_cycle_listing():
    doc = parse_document(CYCLE_JSON)
    assert len(doc.nodes) == 4
    assert len(doc.edges) == 6
    assert doc == make_cycle()


def test_missing_endpoint():
    with pytest.raises(ParseError, match="missing endpoint"):
        parse_document('{"entity": {"ex:e1": {}}, "used": {"_:u1": {"prov:entity": "ex:e1"}}}')


@pytest.mark.parametrize(
    "text, match",
    [
        ("{not json", "malformed JSON"),
        ('{"wasInfluencedBy": {}}', "unknown section"),
        ('{"entity": {"e": {}}, "wasDerivedFrom": {"_:d": {"prov:generatedEntity": "e", "prov:usedEntity": "x"}}}',
         "dangling"),
        ("[1, 2]", "object"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_document(text)


def test_prov_type_values_and_other_attributes():
    doc = parse_document(
        json.dumps(
            {
                "prefix": {"ex": "http://example.org/"},
                "entity": {
                    "v": {"prov:type": "ex:Vote", "ex:colour": "red"},
                    "w": {"prov:type": ["ex:A", {"$": "ex:B", "type": "xsd:QName"}]},
                },
            }
        )
    )
    assert doc.nodes["v"].app_types == {"ex:Vote"}
    assert doc.nodes["w"].app_types == {"ex:A", "ex:B"}


def test_duplicate_statements_collapse():
    doc = parse_document(
        '{"entity": {"a": {}, "b": {}}, "wasDerivedFrom": {'
        '"_:1": {"prov:generatedEntity": "a", "prov:usedEntity": "b"},'
        '"_:2": [{"prov:generatedEntity": "a", "prov:usedEntity": "b"}]}}'
    )
    assert len(doc.edges) == 1


def test_node_in_two_sections_gets_both_kinds():
    doc = parse_document('{"entity": {"x": {}}, "agent": {"x": {}}}')
    assert doc.nodes["x"].core_types == {"Entity", "Agent"}


def test_undeclared_endpoints_when_allowed():
    doc = parse_document('{"used": {"_:u": {"prov:activity": "a", "prov:entity": "e"}}}', allow_undeclared=True)
    assert doc.nodes["a"].core_types == frozenset()
    inferred, warnings = infer_core_types(doc)
    assert inferred.nodes["a"].core_types == {"Activity"}
    assert inferred.nodes["e"].core_types == {"Entity"}
    assert warnings == []


def test_document_integrity():
    with pytest.raises(ValueError):
        ProvDocument.build({"a": "Entity"}, [("a", "b", "wdf")])
    with pytest.raises(ValueError):
        ProvDocument.build({"a": "Entity"}, [], declared_roots=["z"])
    with pytest.raises(ValueError):
        ProvNode("")


def test_roots_default_to_zero_in_degree():
    doc = ProvDocument.build({"a": "Entity", "b": "Entity"}, [("a", "b", "wdf")])
    assert doc.roots == {"a"}
    assert doc.replace(declared_roots={"b"}).roots == {"b"}


# -- inference -----------------------------------------------------------


def _strip(doc):
    return doc.replace(nodes={n: ProvNode(n) for n in doc.nodes})


def test_infer_from_used_source():
    doc = ProvDocument.build([ProvNode("x"), ProvNode("y", {"Entity"})], [("x", "y", "used")])
    inferred, _ = infer_core_types(doc)
    assert "Activity" in inferred.nodes["x"].core_types


def test_infer_recovers_cycle_kinds():
    original = make_cycle()
    inferred, warnings = infer_core_types(_strip(original))
    assert warnings == []
    assert {n: set(v.core_types) for n, v in inferred.nodes.items()} == {
        "e1": {"Entity"}, "e2": {"Entity"}, "a": {"Activity"}, "ag": {"Agent"},
    }
    assert inferred == original


def test_isolated_untyped_node_warns():
    doc = ProvDocument.build([ProvNode("lonely")])
    inferred, warnings = infer_core_types(doc)
    assert inferred == doc
    assert len(warnings) == 1


def test_contradiction_is_a_warning():
    # x is used as an activity and attributed like an entity
    doc = ProvDocument.build(
        [ProvNode("x"), ProvNode("e", {"Entity"}), ProvNode("g", {"Agent"})],
        [("x", "e", "used"), ("x", "g", "wat")],
    )
    inferred, warnings = infer_core_types(doc)
    assert inferred.nodes["x"].core_types == {"Activity", "Entity"}
    assert len(warnings) == 1


def test_declaration_wins_over_positions():
    doc = ProvDocument.build({"x": "Entity", "e": "Entity"}, [("x", "e", "used")])
    inferred, warnings = infer_core_types(doc)
    assert inferred.nodes["x"].core_types == {"Entity"}
    assert len(warnings) == 1


seeds = st.integers(min_value=0, max_value=2**64 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 30), st.floats(0, 3))
def test_round_trip(seed, n, density):
    doc = generate_random(n, density, seed, app_types=("ex:A", "ex:B"), app_type_rate=0.3)
    again = parse_document(dump_document(doc))
    assert again == doc
    assert dump_document(again) == dump_document(doc)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 25), st.floats(0, 3))
def test_inference_idempotent_and_sound(seed, n, density):
    doc = _strip(generate_random(n, density, seed))
    once, warnings = infer_core_types(doc)
    twice, _ = infer_core_types(once)
    assert once == twice
    if not warnings:
        for e in once.edges:
            src_kind, dst_kind = e.label.signature
            assert src_kind in once.nodes[e.src].core_types
            assert dst_kind in once.nodes[e.dst].core_types


def test_untyped_isolated_node_not_serializable():
    with pytest.raises(ValueError):
        document_to_json(ProvDocument.build([ProvNode("x")]))
