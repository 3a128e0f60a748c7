import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from necluster import ParseError, ValidationError, dump_kb, load_kb
from necluster.kb import TypeHierarchy


def test_fixture_types(kb):
    assert set(kb.hierarchy.nodes) == {"Thing", "Location", "City", "Country"}
    assert kb.hierarchy.parent == {"Location": "Thing", "City": "Location",
                                   "Country": "Location"}


def test_supertype_chain(kb):
    assert kb.hierarchy.supertypes_of("City") == ["City", "Location", "Thing"]
    assert kb.hierarchy.supertypes_of("Thing") == ["Thing"]


def test_is_subtype(kb):
    h = kb.hierarchy
    assert h.is_subtype("City", "City")
    assert h.is_subtype("City", "Location")
    assert h.is_subtype("City", "Thing")
    assert not h.is_subtype("Location", "City")
    assert not h.is_subtype("City", "Country")


def test_unknown_type_raises(kb):
    with pytest.raises(ValidationError, match="unknown type"):
        kb.hierarchy.supertypes_of("Planet")
    with pytest.raises(ValidationError):
        kb.hierarchy.is_subtype("City", "Planet")


def test_names_of(kb):
    assert kb.names_of("#C1") == {"Gruzia", "Georgia"}
    assert kb.names_of("#S1") == {"Shenyang"}
    with pytest.raises(ValidationError, match="unknown identifier"):
        kb.names_of("#X9")


def _kb_json(types, entities):
    return io.StringIO(json.dumps({"types": types, "entities": entities}))


def test_duplicate_type():
    with pytest.raises(ValidationError, match="duplicate type"):
        load_kb(_kb_json([{"id": "A", "parent": None}, {"id": "A", "parent": None}], []))


def test_unknown_parent():
    with pytest.raises(ValidationError, match="unknown parent"):
        load_kb(_kb_json([{"id": "A", "parent": "Nope"}], []))


def test_cycle_detected():
    with pytest.raises(ValidationError, match="cycle"):
        load_kb(_kb_json([{"id": "A", "parent": "B"}, {"id": "B", "parent": "A"}], []))


def test_self_cycle_detected():
    with pytest.raises(ValidationError, match="cycle"):
        load_kb(_kb_json([{"id": "A", "parent": "A"}], []))


def test_duplicate_identifier():
    types = [{"id": "T", "parent": None}]
    ents = [{"id": "#1", "type": "T", "name": "x", "aliases": []},
            {"id": "#1", "type": "T", "name": "y", "aliases": []}]
    with pytest.raises(ValidationError, match="duplicate identifier"):
        load_kb(_kb_json(types, ents))


def test_entity_unknown_type():
    with pytest.raises(ValidationError, match="unknown type"):
        load_kb(_kb_json([{"id": "T", "parent": None}],
                         [{"id": "#1", "type": "U", "name": "x", "aliases": []}]))


def test_entity_missing_name():
    with pytest.raises(ValidationError, match="no canonical name"):
        load_kb(_kb_json([{"id": "T", "parent": None}],
                         [{"id": "#1", "type": "T", "aliases": []}]))


def test_parse_errors():
    with pytest.raises(ParseError, match="not valid JSON"):
        load_kb(io.StringIO("{nope"))
    with pytest.raises(ParseError, match="'types' and 'entities'"):
        load_kb(io.StringIO("[]"))
    with pytest.raises(ParseError, match="aliases"):
        load_kb(_kb_json([{"id": "T", "parent": None}],
                         [{"id": "#1", "type": "T", "name": "x", "aliases": "oops"}]))


def test_alias_deduplicates_canonical():
    kb = load_kb(_kb_json([{"id": "T", "parent": None}],
                          [{"id": "#1", "type": "T", "name": "x", "aliases": ["x", "y"]}]))
    assert kb.entities["#1"].aliases == frozenset({"y"})
    assert kb.names_of("#1") == {"x", "y"}


def test_round_trip(kb):
    again = load_kb(io.StringIO(dump_kb(kb)))
    assert again.hierarchy == kb.hierarchy
    assert again.entities == kb.entities
    assert dump_kb(again) == dump_kb(kb)


def _forest(parents: list[int | None]) -> TypeHierarchy:
    names = [f"T{i}" for i in range(len(parents))]
    parent = {names[i]: names[p] for i, p in enumerate(parents) if p is not None}
    return TypeHierarchy(nodes=frozenset(names), parent=parent)


# Each node's parent has a smaller index, so the structure is always a forest.
@settings(max_examples=100, deadline=None)
@given(st.integers(1, 20).flatmap(
    lambda n: st.tuples(*(st.one_of(st.none(), st.integers(0, max(i - 1, 0)))
                          if i else st.none() for i in range(n)))))
def test_forest_subsumption_properties(parents):
    h = _forest(list(parents))
    names = sorted(h.nodes, key=lambda t: int(t[1:]))
    for a in names:
        chain = h.supertypes_of(a)
        assert chain[0] == a
        assert len(chain) == len(set(chain))
        # the chain ends at a root
        assert chain[-1] not in h.parent
        for b in names:
            assert h.is_subtype(a, b) == (b in chain)
