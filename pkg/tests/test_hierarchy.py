import pytest

from necluster import (ClusterConfig, FeatureSpace, GenParams, gen_synthetic,
                       hierarchical_cluster)
from necluster.corpus import Annotation, Corpus, Document


def _tiny_corpus(kb):
    docs = [
        Document("a1", (Annotation("Gruzia", "Country", "#C1"),)),
        Document("a2", (Annotation("Georgia", "Country", "#C1"),)),
        Document("b1", (Annotation("Shenyang", "City", "#S1"),)),
        Document("b2", (Annotation("Shenyang", "City", "#S1"),
                        Annotation("Shenyang", "City", "#S1"))),
    ]
    return Corpus(documents=docs, kb=kb)


@pytest.fixture(scope="module")
def synth_small():
    return gen_synthetic(GenParams(groups=2, docs_per_group=8,
                                   mentions_per_doc=6, noise_rate=0.1, seed=5))


def _check_partition(node):
    if node.children:
        union = sorted(i for child in node.children for i in child.doc_indices)
        assert union == sorted(node.doc_indices), node.cluster_id
        for child in node.children:
            _check_partition(child)


def test_single_document_corpus(kb):
    corpus = Corpus(documents=[Document("only", (Annotation("Gruzia",
                                                            "Country", "#C1"),))],
                    kb=kb)
    result = hierarchical_cluster(corpus, [FeatureSpace.TYPE, FeatureSpace.NAME])
    assert result.root.is_leaf()
    assert result.root.split is None
    assert len(result.phase_reports) == 2
    assert result.leaves() == [result.root]


def test_single_phase_partition(kb):
    corpus = _tiny_corpus(kb)
    result = hierarchical_cluster(corpus, [FeatureSpace.IDENTIFIER],
                                  ClusterConfig(k=2))
    root = result.root
    assert len(root.children) == 2
    assert root.cluster_id == "root"
    assert sorted(child.cluster_id for child in root.children) == ["0", "1"]
    _check_partition(root)
    groups = sorted(sorted(corpus[i].doc_id for i in child.doc_indices)
                    for child in root.children)
    assert groups == [["a1", "a2"], ["b1", "b2"]]
    assert root.children[0].split is None


def test_two_phase_tree(synth_small):
    corpus, _ = synth_small
    result = hierarchical_cluster(corpus, [FeatureSpace.TYPE, FeatureSpace.IDENTIFIER])
    root = result.root
    assert len(root.children) == 2
    _check_partition(root)
    assert result.phase_spaces == [FeatureSpace.TYPE, FeatureSpace.IDENTIFIER]
    assert len(result.phase_reports) == 2
    for child in root.children:
        assert child.space is FeatureSpace.TYPE
        assert len(child.children) == 4
        for leaf in child.children:
            assert leaf.space is FeatureSpace.IDENTIFIER
            assert leaf.cluster_id.startswith(child.cluster_id + ".")
    # layer-2 labels are identifier terms
    for leaf in result.leaves():
        assert all(isinstance(t, str) and t.startswith("#G") for t in leaf.label)


def test_labels_keep_creation_space(synth_small):
    corpus, _ = synth_small
    result = hierarchical_cluster(corpus, [FeatureSpace.TYPE, FeatureSpace.IDENTIFIER])
    for child in result.root.children:
        assert all(t.startswith(("Kind", "Topic")) for t in child.label)


def test_explicit_k_clamped(kb):
    corpus = _tiny_corpus(kb)
    result = hierarchical_cluster(corpus, [FeatureSpace.IDENTIFIER],
                                  ClusterConfig(k=10))
    assert len(result.root.children) <= 4
    _check_partition(result.root)


def test_small_leaves_pass_through(kb):
    corpus = _tiny_corpus(kb)
    result = hierarchical_cluster(corpus, [FeatureSpace.IDENTIFIER,
                                           FeatureSpace.NAME],
                                  [ClusterConfig(k=4), ClusterConfig(k=2)])
    # phase 1 makes singleton/tiny leaves; phase 2 cannot split singletons
    for leaf in result.leaves():
        if leaf.size < 2:
            assert leaf.space is FeatureSpace.IDENTIFIER
    assert len(result.phase_reports) == 2


def test_threads_do_not_change_result(synth_small):
    corpus, _ = synth_small
    phases = [FeatureSpace.TYPE, FeatureSpace.IDENTIFIER]
    r1 = hierarchical_cluster(corpus, phases, threads=1)
    r4 = hierarchical_cluster(corpus, phases, threads=4)

    def snapshot(node):
        return (node.cluster_id, node.space, node.doc_indices,
                frozenset(node.label), [snapshot(c) for c in node.children])

    assert snapshot(r1.root) == snapshot(r4.root)
    assert r1.phase_reports == r4.phase_reports


def test_rescope_idf_runs(synth_small):
    corpus, _ = synth_small
    phases = [FeatureSpace.TYPE, FeatureSpace.NAME]
    result = hierarchical_cluster(corpus, phases, rescope_idf=True)
    _check_partition(result.root)
    again = hierarchical_cluster(corpus, phases, rescope_idf=True)
    assert [leaf.doc_indices for leaf in result.leaves()] == \
        [leaf.doc_indices for leaf in again.leaves()]


def test_validation():
    corpus, _ = gen_synthetic(GenParams(groups=1, docs_per_group=3,
                                        mentions_per_doc=2, noise_rate=0.0, seed=1))
    with pytest.raises(ValueError, match="phases"):
        hierarchical_cluster(corpus, [])
    with pytest.raises(ValueError, match="alpha"):
        hierarchical_cluster(corpus, [FeatureSpace.NAME], alpha=2.0)
    with pytest.raises(ValueError, match="configs"):
        hierarchical_cluster(corpus, [FeatureSpace.NAME],
                             [ClusterConfig(), ClusterConfig()])
    with pytest.raises(ValueError):
        ClusterConfig(k=0).validate()
    with pytest.raises(ValueError):
        ClusterConfig(k="bogus").validate()
    with pytest.raises(ValueError):
        ClusterConfig(min_split_size=1).validate()


def test_per_leaf_seeds_differ(synth_small):
    corpus, _ = synth_small
    result = hierarchical_cluster(corpus, [FeatureSpace.TYPE,
                                           FeatureSpace.IDENTIFIER])
    seeds = [child.split.seed for child in result.root.children
             if child.split is not None]
    assert len(set(seeds)) == len(seeds)
