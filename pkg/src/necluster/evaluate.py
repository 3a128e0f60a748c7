"""Cluster quality evaluation: document labeling and entropy measures.

A document's label is the set of feature values whose weight reaches a
confidence threshold, taken as a fraction of the document's total weight
mass; when nothing reaches it, the single heaviest value is used. Two
documents belong to the same class only when their label sets are equal.
Cluster entropy (label impurity inside clusters) and class entropy
(dispersion of classes across clusters) combine into the overall measure
``alpha * Ec + (1 - alpha) * El`` minimized when tuning k.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .kmeans import Assignment, kmeans_best_of
from .vsm import SparseVector, Term, TermIndex, term_key

# Reserved class for documents with an empty vector in the labeling space.
NO_FEATURES_LABEL = "⊥"

LabelSet = frozenset


def doc_label(vec: SparseVector, index: TermIndex, tc_fraction: float) -> LabelSet:
    """Label a document with its dominant feature values.

    The cutoff is ``tc_fraction`` times the sum of the vector's weights;
    every term at or above it is selected. If none qualifies, the term with
    the maximal weight wins, ties broken by index order. Zero vectors get
    the reserved bottom label.
    """
    if not 0.0 <= tc_fraction <= 1.0:
        raise ValueError(f"tc_fraction={tc_fraction} outside [0, 1]")
    if vec.is_zero():
        return frozenset({NO_FEATURES_LABEL})
    dims = sorted(vec.entries)
    cutoff = tc_fraction * vec.total()
    selected = [d for d in dims if vec.entries[d] >= cutoff]
    if not selected:
        best = dims[0]
        for d in dims[1:]:
            if vec.entries[d] > vec.entries[best]:
                best = d
        selected = [best]
    return frozenset(index.terms[d] for d in selected)


def label_documents(vectors: Sequence[SparseVector], index: TermIndex,
                    tc_fraction: float) -> list[LabelSet]:
    return [doc_label(v, index, tc_fraction) for v in vectors]


def cluster_label(member_labels: Iterable[LabelSet]) -> set[Term]:
    """Union of the member documents' label sets."""
    out: set[Term] = set()
    for lab in member_labels:
        out |= lab
    return out


def _class_key(label: LabelSet) -> tuple[str, ...]:
    return tuple(sorted(term_key(t) for t in label))


@dataclass
class EntropyTable:
    """Contingency counts between clusters and label classes."""

    counts: np.ndarray  # (k, n_classes) int64
    cluster_totals: np.ndarray
    class_totals: np.ndarray
    total: int
    classes: list[LabelSet]


def contingency(cluster_of: Sequence[int], doc_labels: Sequence[LabelSet], k: int) -> EntropyTable:
    if len(cluster_of) != len(doc_labels):
        raise ValueError("one label set required per document")
    classes = sorted(set(doc_labels), key=_class_key)
    class_index = {lab: j for j, lab in enumerate(classes)}
    counts = np.zeros((k, len(classes)), dtype=np.int64)
    for c, lab in zip(cluster_of, doc_labels):
        counts[c, class_index[lab]] += 1
    return EntropyTable(
        counts=counts,
        cluster_totals=counts.sum(axis=1),
        class_totals=counts.sum(axis=0),
        total=int(counts.sum()),
        classes=classes,
    )


@dataclass(frozen=True)
class EntropyReport:
    k: int
    alpha: float
    cluster_entropy: float
    class_entropy: float
    overall: float


def _split_entropy(counts: np.ndarray, group_totals: np.ndarray, total: int) -> float:
    """-sum_g (n_g/N) sum_x (n_gx/n_g) log2(n_gx/n_g), with 0 log 0 = 0."""
    acc = 0.0
    for g in range(counts.shape[0]):
        n_g = int(group_totals[g])
        if n_g == 0:
            continue
        inner = 0.0
        for x in range(counts.shape[1]):
            n = int(counts[g, x])
            if n > 0:
                p = n / n_g
                inner += p * math.log2(p)
        acc += (n_g / total) * inner
    return -acc + 0.0


def entropies(assignment: "Assignment | Sequence[int]", doc_labels: Sequence[LabelSet],
              alpha: float) -> EntropyReport:
    """Cluster entropy, class entropy, and their convex combination.

    ``assignment`` may be a k-means result or a plain cluster-index
    sequence. Every document must carry a label.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    if isinstance(assignment, Assignment):
        cluster_of = assignment.labels
        k = assignment.k
    else:
        cluster_of = list(assignment)
        k = (max(cluster_of) + 1) if cluster_of else 0
    table = contingency(cluster_of, doc_labels, k)
    ec = _split_entropy(table.counts, table.cluster_totals, table.total)
    el = _split_entropy(table.counts.T, table.class_totals, table.total)
    return EntropyReport(
        k=k,
        alpha=alpha,
        cluster_entropy=ec,
        class_entropy=el,
        overall=alpha * ec + (1.0 - alpha) * el,
    )


def tune_k(vectors, doc_labels: Sequence[LabelSet], k_range: Sequence[int],
           alpha: float = 0.5, restarts: int = 4, seed: int = 42,
           max_iterations: int = 100, threads: int = 1) -> tuple[int, list[EntropyReport]]:
    """Sweep k, score each clustering, and pick the minimal overall entropy.

    Returns the winning k (ties go to the smallest k) together with one
    report per candidate, in the order given. Candidates run independently,
    so the sweep may fan out over ``threads`` workers without affecting the
    result.
    """
    ks = list(k_range)
    if not ks:
        raise ValueError("k_range must be nonempty")
    n = len(vectors)
    for k in ks:
        if not 1 <= k <= n:
            raise ValueError(f"k={k} out of range [1, {n}]")

    def run(k: int) -> EntropyReport:
        assignment = kmeans_best_of(vectors, k, seed=seed, restarts=restarts,
                                    max_iterations=max_iterations)
        return entropies(assignment, doc_labels, alpha)

    if threads > 1 and len(ks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, ks))
    else:
        reports = [run(k) for k in ks]
    best = min(reports, key=lambda r: (r.overall, r.k))
    return best.k, reports


def default_k_range(n_docs: int) -> list[int]:
    """Desk-scale sweep: 2 .. min(n, 50); degenerates to [1] for a single doc."""
    if n_docs <= 1:
        return [1]
    return list(range(2, min(n_docs, 50) + 1))
