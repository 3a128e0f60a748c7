"""Clustering of NE-annotated documents over named-entity feature spaces.

Documents carry named-entity annotations (surface name, optional type,
optional KB identifier). They are vectorized with tf.idf into four term
spaces (names, types, name-type pairs, identifiers), clustered with seeded
spherical k-means through one or more hierarchical phases, labeled by
their dominant feature values, and evaluated with an entropy measure that
also drives the choice of k.
"""

from .corpus import (Annotation, Corpus, Document, dump_corpus, lint_corpus,
                     load_corpus, normalize_annotation, write_corpus)
from .errors import ParseError, ValidationError
from .evaluate import (NO_FEATURES_LABEL, EntropyReport, cluster_label,
                       contingency, doc_label, entropies, label_documents,
                       tune_k)
from .hierarchy import (ClusterConfig, ClusterNode, HierarchicalResult,
                        hierarchical_cluster)
from .kb import (EntityRecord, KnowledgeBase, TypeHierarchy, dump_kb, kb_to_dict,
                 load_kb)
from .kmeans import Assignment, kmeans, kmeans_best_of
from .report import build_report, dumps_report, render_html
from .synth import (GenParams, SynthSchema, gen_synthetic, planted_group,
                    planted_identity)
from .vsm import (ALL_SPACES, FeatureSpace, SparseVector, TermIndex,
                  build_all_indexes, build_index, build_vectors, cosine,
                  doc_similarity, document_quad, term_key, term_occurrences,
                  vectorize)

__version__ = "0.1.0"

__all__ = [
    "ALL_SPACES",
    "Annotation",
    "Assignment",
    "ClusterConfig",
    "ClusterNode",
    "Corpus",
    "Document",
    "EntityRecord",
    "EntropyReport",
    "FeatureSpace",
    "GenParams",
    "HierarchicalResult",
    "KnowledgeBase",
    "NO_FEATURES_LABEL",
    "ParseError",
    "SparseVector",
    "SynthSchema",
    "TermIndex",
    "TypeHierarchy",
    "ValidationError",
    "build_all_indexes",
    "build_index",
    "build_report",
    "build_vectors",
    "cluster_label",
    "contingency",
    "cosine",
    "doc_label",
    "doc_similarity",
    "document_quad",
    "dump_corpus",
    "dump_kb",
    "dumps_report",
    "entropies",
    "gen_synthetic",
    "hierarchical_cluster",
    "kb_to_dict",
    "kmeans",
    "kmeans_best_of",
    "label_documents",
    "lint_corpus",
    "load_corpus",
    "load_kb",
    "normalize_annotation",
    "planted_group",
    "planted_identity",
    "render_html",
    "term_key",
    "term_occurrences",
    "tune_k",
    "vectorize",
    "write_corpus",
    "__version__",
]
