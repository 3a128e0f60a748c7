"""Multi-phase hierarchical clustering.

Each phase clusters on one feature space. The first phase partitions the
whole corpus; every later phase independently re-clusters each current
leaf that is large enough, growing the tree top-down. A node therefore
sits at a depth equal to the number of phases completed along its path.

After every phase the current leaves form a partition of the corpus, and
that partition is scored with the entropy measure against the documents'
labels in the phase's feature space.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .corpus import Corpus
from .evaluate import (EntropyReport, LabelSet, cluster_label, default_k_range,
                       entropies, label_documents, tune_k)
from .kmeans import Assignment, kmeans_best_of
from .vsm import FeatureSpace, SparseVector, Term, build_index, build_vectors

ROOT_ID = "root"


@dataclass(frozen=True)
class ClusterConfig:
    """Per-phase clustering knobs. ``k`` is an int or the string "auto"."""

    k: Union[int, str] = "auto"
    seed: int = 42
    restarts: int = 4
    max_iterations: int = 100
    min_split_size: int = 2

    def validate(self) -> None:
        if isinstance(self.k, str):
            if self.k != "auto":
                raise ValueError(f"k must be an integer or 'auto', got {self.k!r}")
        elif self.k < 1:
            raise ValueError(f"k={self.k} must be at least 1")
        if self.min_split_size < 2:
            raise ValueError("min_split_size must be at least 2")


@dataclass
class SplitInfo:
    """How a node was divided: the chosen k, the seed, and the solver traces."""

    k: int
    seed: int
    objective_trace: list[float]
    wcss_trace: list[float]
    tuning: list[EntropyReport] | None = None


@dataclass
class ClusterNode:
    """One cluster in the tree.

    ``cluster_id`` is a dotted path ("root", "0", "0.1", ...); children are
    numbered densely in the order their parent's sub-clusters come out.
    ``doc_indices`` point into the corpus the tree was built from.
    """

    cluster_id: str
    space: FeatureSpace | None
    doc_indices: tuple[int, ...]
    label: set[Term] = field(default_factory=set)
    children: list["ClusterNode"] = field(default_factory=list)
    split: SplitInfo | None = None

    @property
    def size(self) -> int:
        return len(self.doc_indices)

    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> Iterator["ClusterNode"]:
        if self.is_leaf():
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def walk(self) -> Iterator["ClusterNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class HierarchicalResult:
    root: ClusterNode
    phase_spaces: list[FeatureSpace]
    phase_reports: list[EntropyReport]
    n_documents: int

    def leaves(self) -> list[ClusterNode]:
        return list(self.root.leaves())


def _child_id(parent: ClusterNode, ordinal: int) -> str:
    if parent.cluster_id == ROOT_ID:
        return str(ordinal)
    return f"{parent.cluster_id}.{ordinal}"


def _resolve_k(cfg: ClusterConfig, n: int) -> Union[int, str]:
    """Explicit k clamped to the leaf size; "auto" passes through."""
    if cfg.k == "auto":
        return "auto"
    return min(int(cfg.k), n)


def _split_leaf(
    leaf: ClusterNode,
    vectors: Sequence[SparseVector],
    doc_labels: Sequence[LabelSet],
    cfg: ClusterConfig,
    seed: int,
    alpha: float,
) -> tuple[Assignment, SplitInfo] | None:
    local = [vectors[i] for i in leaf.doc_indices]
    local_labels = [doc_labels[i] for i in leaf.doc_indices]
    tuning: list[EntropyReport] | None = None
    k = _resolve_k(cfg, leaf.size)
    if k == "auto":
        k, tuning = tune_k(local, local_labels, default_k_range(leaf.size),
                           alpha=alpha, restarts=cfg.restarts, seed=seed,
                           max_iterations=cfg.max_iterations)
    if k < 2:
        return None
    assignment = kmeans_best_of(local, k, seed=seed, restarts=cfg.restarts,
                                max_iterations=cfg.max_iterations)
    info = SplitInfo(k=k, seed=seed, objective_trace=assignment.objective_trace,
                     wcss_trace=assignment.inertia_trace, tuning=tuning)
    return assignment, info


def _phase_configs(phases: Sequence[FeatureSpace],
                   configs: Union[ClusterConfig, Sequence[ClusterConfig], None]) -> list[ClusterConfig]:
    if configs is None:
        out = [ClusterConfig() for _ in phases]
    elif isinstance(configs, ClusterConfig):
        out = [configs for _ in phases]
    else:
        out = list(configs)
        if len(out) != len(phases):
            raise ValueError(f"got {len(out)} configs for {len(phases)} phases")
    for cfg in out:
        cfg.validate()
    return out


def hierarchical_cluster(
    corpus: Corpus,
    phases: Sequence[FeatureSpace],
    configs: Union[ClusterConfig, Sequence[ClusterConfig], None] = None,
    *,
    alpha: float = 0.5,
    tc_fraction: float = 0.4,
    rescope_idf: bool = False,
    threads: int = 1,
) -> HierarchicalResult:
    """Cluster the corpus through the given sequence of feature-space phases.

    Leaves smaller than the phase's ``min_split_size`` pass through
    unchanged. Splitting uses a per-leaf seed (the phase seed plus the
    leaf's ordinal among that phase's leaves), so runs are reproducible yet
    sibling subproblems do not share initializations. With ``rescope_idf``
    the idf statistics are recomputed inside each leaf instead of reusing
    the corpus-wide index.
    """
    phases = list(phases)
    if not phases:
        raise ValueError("phases must be nonempty")
    cfgs = _phase_configs(phases, configs)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")

    root = ClusterNode(cluster_id=ROOT_ID, space=None,
                       doc_indices=tuple(range(len(corpus))))
    reports: list[EntropyReport] = []

    for space, cfg in zip(phases, cfgs):
        leaves = list(root.leaves())
        index = build_index(corpus, space)
        vectors = build_vectors(corpus, index)
        doc_labels = label_documents(vectors, index, tc_fraction)

        def leaf_view(leaf: ClusterNode) -> tuple[Sequence[SparseVector], Sequence[LabelSet]]:
            if not rescope_idf:
                return vectors, doc_labels
            sub = Corpus(documents=[corpus[i] for i in leaf.doc_indices], kb=corpus.kb)
            sub_index = build_index(sub, space)
            sub_vectors = build_vectors(sub, sub_index)
            sub_labels = label_documents(sub_vectors, sub_index, tc_fraction)
            scoped_vectors: list[SparseVector] = list(vectors)
            scoped_labels: list[LabelSet] = list(doc_labels)
            for pos, i in enumerate(leaf.doc_indices):
                scoped_vectors[i] = sub_vectors[pos]
                scoped_labels[i] = sub_labels[pos]
            return scoped_vectors, scoped_labels

        def split_one(job: tuple[int, ClusterNode]) -> tuple[Assignment, SplitInfo] | None:
            ordinal, leaf = job
            scoped_vectors, scoped_labels = leaf_view(leaf)
            return _split_leaf(leaf, scoped_vectors, scoped_labels, cfg,
                               seed=cfg.seed + ordinal, alpha=alpha)

        jobs = [(ordinal, leaf) for ordinal, leaf in enumerate(leaves)
                if leaf.size >= cfg.min_split_size]
        if threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(split_one, jobs))
        else:
            outcomes = [split_one(job) for job in jobs]

        for (_, leaf), outcome in zip(jobs, outcomes):
            if outcome is None:
                continue
            assignment, info = outcome
            leaf.split = info
            ordinal = 0
            for c in range(assignment.k):
                members = assignment.cluster_members(c)
                if members.size == 0:
                    continue
                doc_indices = tuple(leaf.doc_indices[int(pos)] for pos in members)
                child = ClusterNode(
                    cluster_id=_child_id(leaf, ordinal),
                    space=space,
                    doc_indices=doc_indices,
                )
                leaf.children.append(child)
                ordinal += 1

        # Label the nodes this phase introduced (plus the root, first time
        # around) in this phase's space; nodes keep the label of the phase
        # that created them. Doc labels are never empty (the bottom label
        # stands in for featureless documents), so an empty label means
        # "not labeled yet".
        for node in root.walk():
            if not node.label:
                node.label = cluster_label(doc_labels[i] for i in node.doc_indices)

        new_leaves = list(root.leaves())
        cluster_of = [0] * len(corpus)
        for j, leaf in enumerate(new_leaves):
            for i in leaf.doc_indices:
                cluster_of[i] = j
        reports.append(entropies(cluster_of, doc_labels, alpha))

    return HierarchicalResult(
        root=root,
        phase_spaces=phases,
        phase_reports=reports,
        n_documents=len(corpus),
    )
