"""NE-annotated documents: loading, validation, normalization, serialization.

A document is an ordered list of mention occurrences; the same annotation may
appear repeatedly and each occurrence counts once toward term frequencies.
An annotation takes one of three forms: name only, name plus type, or name
plus type plus identifier. Normalization fills missing name/type fields from
the KB whenever an identifier is present.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import ParseError, ValidationError
from .kb import KnowledgeBase, Source, _read_text


@dataclass(frozen=True)
class Annotation:
    name: str
    entity_type: str | None = None
    entity_id: str | None = None


@dataclass(frozen=True)
class Document:
    doc_id: str
    annotations: tuple[Annotation, ...]
    group_truth: str | None = None


@dataclass
class Corpus:
    documents: list[Document]
    kb: KnowledgeBase = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __getitem__(self, i: int) -> Document:
        return self.documents[i]


def normalize_annotation(raw: dict, kb: KnowledgeBase, where: str) -> Annotation:
    """Validate one raw annotation object and fill derivable fields.

    With an identifier present, the type (and, if omitted, the surface name)
    is derived from the KB; a type given alongside an identifier must equal
    the KB type exactly.
    """
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: annotation must be an object")
    name = raw.get("name")
    etype = raw.get("type")
    eid = raw.get("entity_id")
    for key, val in (("name", name), ("type", etype), ("entity_id", eid)):
        if val is not None and not isinstance(val, str):
            raise ParseError(f"{where}: '{key}' must be a string")

    if eid is not None:
        if eid not in kb:
            raise ValidationError(f"{where}: unknown entity_id {eid!r}")
        record = kb.entities[eid]
        if etype is not None and etype != record.entity_type:
            raise ValidationError(
                f"{where}: type mismatch for {eid!r}: "
                f"annotation says {etype!r}, KB says {record.entity_type!r}"
            )
        etype = record.entity_type
        if name is None:
            name = record.canonical_name
    elif etype is not None and etype not in kb.hierarchy:
        raise ValidationError(f"{where}: unknown entity_type {etype!r}")

    if not name:
        raise ValidationError(f"{where}: annotation has no name")
    return Annotation(name=name, entity_type=etype, entity_id=eid)


def _parse_document(line: str, lineno: int, kb: KnowledgeBase, seen: set[str]) -> Document:
    where = f"line {lineno}"
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: document must be an object")
    doc_id = raw.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise ParseError(f"{where}: 'doc_id' must be a nonempty string")
    if doc_id in seen:
        raise ValidationError(f"{where}: duplicate doc_id {doc_id!r}")
    anns_raw = raw.get("annotations", [])
    if not isinstance(anns_raw, list):
        raise ParseError(f"{where}: 'annotations' must be a list")
    annotations = tuple(
        normalize_annotation(a, kb, f"{where}, annotation {j}") for j, a in enumerate(anns_raw)
    )
    group_truth = raw.get("group_truth")
    if group_truth is not None and not isinstance(group_truth, str):
        raise ParseError(f"{where}: 'group_truth' must be a string")
    seen.add(doc_id)
    return Document(doc_id=doc_id, annotations=annotations, group_truth=group_truth)


def load_corpus(source: Source, kb: KnowledgeBase) -> Corpus:
    """Load a JSON-Lines corpus, validating every annotation against the KB.

    Raises on the first problem encountered; use :func:`lint_corpus` to
    collect all diagnostics instead.
    """
    text = _read_text(source)
    documents: list[Document] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        documents.append(_parse_document(line, lineno, kb, seen))
    return Corpus(documents=documents, kb=kb)


def lint_corpus(source: Source, kb: KnowledgeBase) -> list[str]:
    """All diagnostics for a corpus file, one string per offending line."""
    text = _read_text(source)
    problems: list[str] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            _parse_document(line, lineno, kb, seen)
        except (ParseError, ValidationError) as exc:
            problems.append(str(exc))
    return problems


def document_to_dict(doc: Document) -> dict:
    anns = []
    for a in doc.annotations:
        entry: dict = {"name": a.name}
        if a.entity_type is not None:
            entry["type"] = a.entity_type
        if a.entity_id is not None:
            entry["entity_id"] = a.entity_id
        anns.append(entry)
    out: dict = {"doc_id": doc.doc_id, "annotations": anns}
    if doc.group_truth is not None:
        out["group_truth"] = doc.group_truth
    return out


def dump_corpus(corpus: Corpus) -> str:
    """Serialize to JSON-Lines; loading the result reproduces the corpus."""
    buf = io.StringIO()
    for doc in corpus.documents:
        buf.write(json.dumps(document_to_dict(doc), ensure_ascii=False))
        buf.write("\n")
    return buf.getvalue()


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(dump_corpus(corpus), encoding="utf-8")
