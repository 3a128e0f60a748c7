"""Entity type hierarchy and knowledge base.

The KB registers known entities (identifier, canonical name, aliases, type)
plus a single-parent type hierarchy used for subsumption queries. Everything
is immutable after load, so instances can be shared freely across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

from .errors import ParseError, ValidationError

Source = Union[str, Path, IO[str], IO[bytes]]


@dataclass(frozen=True)
class TypeHierarchy:
    """A forest of entity types: each type has at most one parent."""

    nodes: frozenset[str]
    parent: dict[str, str]  # child -> parent; roots are absent

    def __contains__(self, type_id: str) -> bool:
        return type_id in self.nodes

    def _require(self, type_id: str) -> None:
        if type_id not in self.nodes:
            raise ValidationError(f"unknown type {type_id!r}")

    def supertypes_of(self, type_id: str) -> list[str]:
        """All ancestors of ``type_id`` including itself, nearest first."""
        self._require(type_id)
        chain = [type_id]
        current = type_id
        while current in self.parent:
            current = self.parent[current]
            chain.append(current)
        return chain

    def is_subtype(self, t1: str, t2: str) -> bool:
        """True iff ``t2`` is reachable from ``t1`` by zero or more parent steps."""
        self._require(t1)
        self._require(t2)
        current = t1
        while True:
            if current == t2:
                return True
            if current not in self.parent:
                return False
            current = self.parent[current]


@dataclass(frozen=True)
class EntityRecord:
    identifier: str
    entity_type: str
    canonical_name: str
    aliases: frozenset[str]

    def names(self) -> set[str]:
        return {self.canonical_name, *self.aliases}


@dataclass(frozen=True)
class KnowledgeBase:
    hierarchy: TypeHierarchy
    entities: dict[str, EntityRecord] = field(default_factory=dict)

    def __contains__(self, identifier: str) -> bool:
        return identifier in self.entities

    def names_of(self, identifier: str) -> set[str]:
        """Canonical name plus all aliases of the entity. Never empty."""
        try:
            return self.entities[identifier].names()
        except KeyError:
            raise ValidationError(f"unknown identifier {identifier!r}") from None


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    raw = source.read()
    return raw.decode("utf-8") if isinstance(raw, bytes) else raw


def _check_acyclic(parent: dict[str, str]) -> None:
    cleared: set[str] = set()
    for start in parent:
        if start in cleared:
            continue
        path: list[str] = []
        on_path: set[str] = set()
        current = start
        while current in parent and current not in cleared:
            if current in on_path:
                raise ValidationError(f"cycle in type hierarchy involving {current!r}")
            on_path.add(current)
            path.append(current)
            current = parent[current]
        cleared.update(path)


def load_kb(source: Source) -> KnowledgeBase:
    """Load and validate a KB file.

    Expected shape: ``{"types": [{"id", "parent"}], "entities": [{"id",
    "type", "name", "aliases"}]}``. Raises :class:`ParseError` for malformed
    input and :class:`ValidationError` for invariant violations (cycles,
    duplicates, unknown references), naming the offending record.
    """
    text = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"KB is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "types" not in doc or "entities" not in doc:
        raise ParseError("KB must be an object with 'types' and 'entities' keys")

    nodes: set[str] = set()
    parent: dict[str, str] = {}
    for i, entry in enumerate(doc["types"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str) or not entry["id"]:
            raise ParseError(f"types[{i}]: expected an object with a nonempty string 'id'")
        type_id = entry["id"]
        if type_id in nodes:
            raise ValidationError(f"duplicate type {type_id!r}")
        nodes.add(type_id)
        if entry.get("parent") is not None:
            if not isinstance(entry["parent"], str):
                raise ParseError(f"types[{i}]: 'parent' must be a string or null")
            parent[type_id] = entry["parent"]
    for child, par in parent.items():
        if par not in nodes:
            raise ValidationError(f"type {child!r} has unknown parent {par!r}")
    _check_acyclic(parent)
    hierarchy = TypeHierarchy(nodes=frozenset(nodes), parent=parent)

    entities: dict[str, EntityRecord] = {}
    for i, entry in enumerate(doc["entities"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str) or not entry["id"]:
            raise ParseError(f"entities[{i}]: expected an object with a nonempty string 'id'")
        ident = entry["id"]
        if ident in entities:
            raise ValidationError(f"duplicate identifier {ident!r}")
        etype = entry.get("type")
        if not isinstance(etype, str) or etype not in nodes:
            raise ValidationError(f"entity {ident!r} has unknown type {etype!r}")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise ValidationError(f"entity {ident!r} has no canonical name")
        aliases = entry.get("aliases", [])
        if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
            raise ParseError(f"entities[{i}]: 'aliases' must be a list of strings")
        entities[ident] = EntityRecord(
            identifier=ident,
            entity_type=etype,
            canonical_name=name,
            aliases=frozenset(a for a in aliases if a != name),
        )
    return KnowledgeBase(hierarchy=hierarchy, entities=entities)


def kb_to_dict(kb: KnowledgeBase) -> dict:
    """KB as a JSON-ready dict, records sorted by id for stable output."""
    type_ids = sorted(kb.hierarchy.nodes)
    return {
        "types": [
            {"id": t, "parent": kb.hierarchy.parent.get(t)} for t in type_ids
        ],
        "entities": [
            {
                "id": rec.identifier,
                "type": rec.entity_type,
                "name": rec.canonical_name,
                "aliases": sorted(rec.aliases),
            }
            for rec in sorted(kb.entities.values(), key=lambda r: r.identifier)
        ],
    }


def dump_kb(kb: KnowledgeBase) -> str:
    return json.dumps(kb_to_dict(kb), ensure_ascii=False, indent=2) + "\n"
