import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_signature
from provapt.errors import ResourceLimitError
from provapt.generators import generate_chain, generate_random
from provapt.model import ProvDocument, ProvNode, RelationLabel
from provapt.ptype import (
    Direction,
    TermTable,
    compute_signatures,
    level0_types,
    next_level,
    signature_key,
)

# published level-4 list for a; walking the graph shows it belongs to e2
PUBLISHED_TAU4 = {
    "wdf(wgb(used(wat(Agent))))",
    "wdf(wgb(used(wdf(Entity))))",
    "wdf(wgb(used(wgb(Activity))))",
    "wgb(used(wdf(wat(Agent))))",
    "wgb(used(wdf(wgb(Activity))))",
    "wgb(used(wgb(used(Entity))))",
}
# every level-k type of a starts with used(...), a's only outgoing label
A_TAU4 = {
    "used(wdf(wgb(used(Entity))))",
    "used(wgb(used(wat(Agent))))",
    "used(wgb(used(wdf(Entity))))",
    "used(wgb(used(wgb(Activity))))",
}


def texts(terms):
    return {t.text for t in terms}


def test_interning_shares_identity():
    table = TermTable()
    agent = table.base("Agent")
    a = table.app(RelationLabel.USED, table.app(RelationLabel.WAT, agent))
    b = table.parse("used(wat(Agent))")
    assert a is b
    assert a.text == "used(wat(Agent))"
    assert a.level == 2
    assert a.labels() == ("used", "wat")
    assert a.base() is agent
    assert len(table) == 3


def test_terms_from_different_tables_compare_by_text():
    assert TermTable().parse("wdf(Entity)") == TermTable().parse("wdf(Entity)")


def test_inverse_rendering():
    table = TermTable()
    t = table.app(RelationLabel.WGB, table.base("Activity"), inverse=True)
    assert t.text == "inv-wgb(Activity)"
    assert table.parse("inv-wgb(Activity)") is t


def test_level0(cycle_doc):
    assert texts(level0_types(cycle_doc, "a")) == {"Activity"}
    doc = ProvDocument.build([ProvNode("v", {"Entity"}, {"Vote"}), ProvNode("z")])
    assert texts(level0_types(doc, "v")) == {"Entity", "Vote"}
    assert level0_types(doc, "z") == frozenset()
    with pytest.raises(KeyError):
        level0_types(doc, "nope")


def test_next_level_on_cycle(cycle_doc):
    table = TermTable()
    lvl0 = {n: level0_types(cycle_doc, n, table) for n in cycle_doc.nodes}
    lvl1 = next_level(cycle_doc, lvl0, table=table)
    assert texts(lvl1["a"]) == {"used(Entity)"}
    lvl2 = next_level(cycle_doc, lvl1, table=table)
    assert texts(lvl2["a"]) == {"used(wat(Agent))", "used(wdf(Entity))", "used(wgb(Activity))"}


def test_next_level_without_edges():
    doc = ProvDocument.build({"x": "Entity", "y": "Agent"})
    table = TermTable()
    lvl0 = {n: level0_types(doc, n, table) for n in doc.nodes}
    assert next_level(doc, lvl0, table=table) == {"x": frozenset(), "y": frozenset()}


def test_cycle_signatures(cycle_doc, backend):
    sigs = compute_signatures(cycle_doc, 4, backend=backend)
    a = sigs["a"].strings()
    assert a[0] == ("Activity",)
    assert a[1] == ("used(Entity)",)
    assert set(a[2]) == {"used(wat(Agent))", "used(wdf(Entity))", "used(wgb(Activity))"}
    assert set(a[4]) == A_TAU4
    assert set(sigs["e2"].strings()[4]) == PUBLISHED_TAU4


def test_k0_is_level0(cycle_doc):
    sigs = compute_signatures(cycle_doc, 0)
    for n, sig in sigs.items():
        assert sig.levels == (level0_types(cycle_doc, n),)


def test_chain_k2(backend):
    doc = ProvDocument.build(
        {f"e{i}": "Entity" for i in range(4)},
        [("e3", "e2", "wdf"), ("e2", "e1", "wdf"), ("e1", "e0", "wdf")],
    )
    sigs = {n: s.strings() for n, s in compute_signatures(doc, 2, backend=backend).items()}
    assert sigs["e0"] == (("Entity",), (), ())
    assert sigs["e1"] == (("Entity",), ("wdf(Entity)",), ())
    assert sigs["e2"] == sigs["e3"] == (("Entity",), ("wdf(Entity)",), ("wdf(wdf(Entity))",))


def test_inverse_direction_on_chain():
    doc = generate_chain(3)  # e2 wdf e1 wdf e0
    sigs = compute_signatures(doc, 2, Direction.INVERSE)
    assert sigs["e0"].strings() == (("Entity",), ("inv-wdf(Entity)",), ("inv-wdf(inv-wdf(Entity))",))
    assert sigs["e2"].strings() == (("Entity",), (), ())


def test_cap_enforced(cycle_doc, backend):
    with pytest.raises(ResourceLimitError):
        compute_signatures(cycle_doc, 6, cap=10, backend=backend)
    compute_signatures(cycle_doc, 1, cap=10, backend=backend)


def test_signature_key_is_unambiguous():
    assert signature_key([["a|b"], []]) != signature_key([["a"], ["b"]])
    assert signature_key([["b", "a"]]) == signature_key([["a", "b"]])


def test_negative_k():
    with pytest.raises(ValueError):
        compute_signatures(generate_chain(2), -1)


small_docs = st.builds(
    generate_random,
    st.integers(1, 12),
    st.floats(0, 2.5),
    st.integers(0, 2**64 - 1),
    app_types=st.just(("ex:A",)),
    app_type_rate=st.sampled_from([0.0, 0.3]),
)


@settings(max_examples=80, deadline=None)
@given(small_docs, st.integers(0, 4), st.sampled_from(list(Direction)))
def test_path_correspondence(doc, k, direction):
    sigs = compute_signatures(doc, k, direction)
    inverse = direction is Direction.INVERSE
    for n in doc.nodes:
        assert sigs[n].strings() == oracle_signature(doc, n, k, inverse)
        for i, level in enumerate(sigs[n].levels):
            assert all(t.level == i for t in level)


@settings(max_examples=40, deadline=None)
@given(small_docs, st.integers(0, 5))
def test_monotone_prefix(doc, k):
    full = compute_signatures(doc, k)
    for j in range(k + 1):
        part = compute_signatures(doc, j)
        assert all(full[n].prefix(j) == part[n] for n in doc.nodes)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.floats(0, 3), st.integers(0, 2**64 - 1), st.integers(0, 4))
def test_backends_agree(n, density, seed, k):
    doc = generate_random(n, density, seed)
    py = compute_signatures(doc, k, backend="python")
    for name in ("cython",):
        try:
            other = compute_signatures(doc, k, backend=name)
        except ValueError:
            pytest.skip(f"{name} kernels not built")
        assert {x: s.key for x, s in py.items()} == {x: s.key for x, s in other.items()}
