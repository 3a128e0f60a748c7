"""Vector space model over named-entity features.

Documents are represented in four term spaces: entity names, entity types,
name-type pairs, and entity identifiers. A term "occurs" in a document
according to per-space rules that expand aliases (an identified mention
counts toward every name of its entity) and type subsumption (a typed
mention counts toward its type and every ancestor type). Weights follow
tf.idf: normalized in-document frequency times the natural log of the
inverse document frequency.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Union

from .corpus import Annotation, Corpus, Document
from .kb import KnowledgeBase

# A term is a plain string in the name/type/identifier spaces and an
# (name, type) pair in the name-type space.
Term = Union[str, tuple[str, str]]


class FeatureSpace(enum.Enum):
    NAME = "name"
    TYPE = "type"
    NAME_TYPE = "nametype"
    IDENTIFIER = "identifier"

    @classmethod
    def parse(cls, text: str) -> "FeatureSpace":
        try:
            return cls(text.strip().lower())
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown feature space {text!r} (choose from: {choices})") from None


ALL_SPACES = (FeatureSpace.NAME, FeatureSpace.TYPE, FeatureSpace.NAME_TYPE, FeatureSpace.IDENTIFIER)


def term_key(term: Term) -> str:
    """Stable string form of a term, used for sorting, export, and display."""
    if isinstance(term, tuple):
        return f"{term[0]}|{term[1]}"
    return term


def _name_terms(a: Annotation, kb: KnowledgeBase) -> list[str]:
    if a.entity_id is not None:
        return sorted(kb.names_of(a.entity_id))
    return [a.name]


def _type_terms(a: Annotation, kb: KnowledgeBase) -> list[str]:
    if a.entity_type is None:
        return []
    return kb.hierarchy.supertypes_of(a.entity_type)


def term_occurrences(doc: Document, space: FeatureSpace, kb: KnowledgeBase) -> Counter:
    """Multiset of terms occurring in ``doc`` for one feature space.

    Per annotation occurrence: the name space emits every name of the
    identified entity (or the surface name when unidentified); the type
    space emits the full ancestor chain of the recognized type (nothing for
    untyped mentions); the name-type space emits the cross product of the
    two; the identifier space emits the identifier when present.
    """
    counts: Counter = Counter()
    for a in doc.annotations:
        if space is FeatureSpace.NAME:
            counts.update(_name_terms(a, kb))
        elif space is FeatureSpace.TYPE:
            counts.update(_type_terms(a, kb))
        elif space is FeatureSpace.NAME_TYPE:
            counts.update(product(_name_terms(a, kb), _type_terms(a, kb)))
        else:
            if a.entity_id is not None:
                counts[a.entity_id] += 1
    return counts


@dataclass
class TermIndex:
    """Indexed vocabulary of one feature space with document frequencies."""

    space: FeatureSpace
    terms: list[Term]
    doc_freq: list[int]
    corpus_size: int
    dim_of: dict[Term, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self.dim_of:
            self.dim_of = {t: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)


def build_index(corpus: Corpus, space: FeatureSpace, kb: KnowledgeBase | None = None) -> TermIndex:
    """Index the vocabulary of ``space`` over the corpus.

    Terms get dimensions in sorted key order, so the assignment is a pure
    function of the corpus content. Every document counts toward the corpus
    size even when it contributes no terms.
    """
    kb = kb if kb is not None else corpus.kb
    df: Counter = Counter()
    for doc in corpus:
        df.update(term_occurrences(doc, space, kb).keys())
    terms = sorted(df.keys())
    return TermIndex(
        space=space,
        terms=terms,
        doc_freq=[df[t] for t in terms],
        corpus_size=len(corpus),
    )


@dataclass(frozen=True)
class SparseVector:
    """Nonnegative sparse weights over one feature space; zeros are not stored."""

    space: FeatureSpace
    entries: dict[int, float]

    def is_zero(self) -> bool:
        return not self.entries

    def total(self) -> float:
        return sum(self.entries[d] for d in sorted(self.entries))

    def norm(self) -> float:
        return math.sqrt(sum(self.entries[d] ** 2 for d in sorted(self.entries)))


def vectorize(doc: Document, index: TermIndex, kb: KnowledgeBase) -> SparseVector:
    """tf.idf vector of a document over an existing index.

    tf is the occurrence count divided by the maximum count among the
    document's in-vocabulary terms; idf is ln(N / n_i). Out-of-vocabulary
    terms are dropped. Documents with no in-vocabulary occurrences map to
    the zero vector.
    """
    occ = term_occurrences(doc, index.space, kb)
    present = [(index.dim_of[t], c) for t, c in occ.items() if t in index.dim_of]
    if not present:
        return SparseVector(space=index.space, entries={})
    max_freq = max(c for _, c in present)
    n = index.corpus_size
    entries: dict[int, float] = {}
    for dim, count in sorted(present):
        weight = (count / max_freq) * math.log(n / index.doc_freq[dim])
        if weight != 0.0:
            entries[dim] = weight
    return SparseVector(space=index.space, entries=entries)


def build_vectors(corpus: Corpus, index: TermIndex, kb: KnowledgeBase | None = None) -> list[SparseVector]:
    kb = kb if kb is not None else corpus.kb
    return [vectorize(doc, index, kb) for doc in corpus]


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine similarity in [0, 1]; zero vectors are dissimilar to everything."""
    if a.space is not b.space:
        raise ValueError(f"space mismatch: {a.space.value} vs {b.space.value}")
    norm_a = a.norm()
    norm_b = b.norm()
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = 0.0
    for dim in sorted(a.entries.keys() & b.entries.keys()):
        dot += a.entries[dim] * b.entries[dim]
    return dot / (norm_a * norm_b)


def doc_similarity(
    a: Mapping[FeatureSpace, SparseVector],
    b: Mapping[FeatureSpace, SparseVector],
    weights: Mapping[FeatureSpace, float],
) -> float:
    """Single-number similarity: weighted mean of per-space cosines.

    Only spaces where both documents have a nonzero vector participate; the
    weights are renormalized over those spaces. Returns 0 when no space is
    shared.
    """
    if any(w < 0 for w in weights.values()):
        raise ValueError("space weights must be nonnegative")
    if sum(weights.values()) <= 0:
        raise ValueError("space weights must not all be zero")
    num = 0.0
    den = 0.0
    for space in ALL_SPACES:
        w = weights.get(space, 0.0)
        if w == 0.0 or space not in a or space not in b:
            continue
        if a[space].is_zero() or b[space].is_zero():
            continue
        num += w * cosine(a[space], b[space])
        den += w
    return num / den if den > 0 else 0.0


def document_quad(
    doc: Document, indexes: Mapping[FeatureSpace, TermIndex], kb: KnowledgeBase
) -> dict[FeatureSpace, SparseVector]:
    """The four-space representation of one document."""
    return {space: vectorize(doc, indexes[space], kb) for space in indexes}


def build_all_indexes(corpus: Corpus, kb: KnowledgeBase | None = None) -> dict[FeatureSpace, TermIndex]:
    return {space: build_index(corpus, space, kb) for space in ALL_SPACES}
