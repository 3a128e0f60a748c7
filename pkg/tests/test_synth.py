import pytest

from necluster import GenParams, SynthSchema, dump_corpus, dump_kb, gen_synthetic, lint_corpus
from necluster.synth import planted_group, planted_identity

import io


def test_deterministic():
    params = GenParams(groups=3, docs_per_group=5, mentions_per_doc=4,
                       noise_rate=0.2, seed=11)
    c1, kb1 = gen_synthetic(params)
    c2, kb2 = gen_synthetic(params)
    assert dump_kb(kb1) == dump_kb(kb2)
    assert dump_corpus(c1) == dump_corpus(c2)


def test_seed_changes_output():
    base = dict(groups=2, docs_per_group=5, mentions_per_doc=4, noise_rate=0.2)
    c1, _ = gen_synthetic(GenParams(seed=1, **base))
    c2, _ = gen_synthetic(GenParams(seed=2, **base))
    assert dump_corpus(c1) != dump_corpus(c2)


def test_shapes_and_ids():
    corpus, kb = gen_synthetic(GenParams(groups=2, docs_per_group=6,
                                         mentions_per_doc=3, noise_rate=0.0, seed=1))
    assert len(corpus) == 12
    assert corpus[0].doc_id == "g0e0d000"
    assert corpus[1].doc_id == "g0e1d001"
    assert corpus[4].doc_id == "g0e0d004"  # identities cycle round-robin
    assert all(doc.group_truth in {"g0", "g1"} for doc in corpus)
    assert planted_group(corpus[0]) == "g0"
    assert planted_identity(corpus[4]) == "#G0E0"
    assert planted_identity(corpus[7]) == "#G1E1"


def test_kb_structure():
    _, kb = gen_synthetic(GenParams(groups=2, docs_per_group=1, mentions_per_doc=1,
                                    noise_rate=0.0, seed=1),
                          SynthSchema(entities_per_group=3, aliases_per_entity=2,
                                      types_per_group=3))
    assert "Topic0" in kb.hierarchy and "Topic1" in kb.hierarchy
    assert kb.hierarchy.parent["Kind0K0"] == "Topic0"
    assert kb.hierarchy.parent["Kind0K1"] == "Topic0"
    assert len(kb.entities) == 6
    rec = kb.entities["#G0E0"]
    assert rec.canonical_name == "G0E0"
    assert rec.aliases == frozenset({"G0E0A0", "G0E0A1"})
    # each group's entity types stay inside its own subtree
    for rec in kb.entities.values():
        group = rec.identifier[2]
        chain = kb.hierarchy.supertypes_of(rec.entity_type)
        assert chain[-1] == f"Topic{group}"


def test_single_type_group_uses_root():
    _, kb = gen_synthetic(GenParams(groups=1, docs_per_group=1, mentions_per_doc=1,
                                    noise_rate=0.0, seed=1),
                          SynthSchema(types_per_group=1))
    assert kb.hierarchy.nodes == frozenset({"Topic0"})
    assert all(rec.entity_type == "Topic0" for rec in kb.entities.values())


def test_noise_mentions_are_unlinked_and_foreign():
    corpus, kb = gen_synthetic(GenParams(groups=3, docs_per_group=10,
                                         mentions_per_doc=8, noise_rate=0.5, seed=3))
    saw_noise = False
    name_to_group = {}
    for rec in kb.entities.values():
        for name in rec.names():
            name_to_group[name] = rec.identifier[2]
    for doc in corpus:
        own = doc.group_truth[1]
        for a in doc.annotations:
            if a.entity_id is None:
                saw_noise = True
                assert a.entity_type is None
                assert name_to_group[a.name] != own
            else:
                assert a.entity_id[2] == own
                assert a.entity_type is not None
    assert saw_noise


def test_identity_focus_one_mentions_only_identity():
    corpus, _ = gen_synthetic(GenParams(groups=2, docs_per_group=8,
                                        mentions_per_doc=5, noise_rate=0.0, seed=9))
    for doc in corpus:
        ids = {a.entity_id for a in doc.annotations}
        assert ids == {planted_identity(doc)}


def test_identity_focus_zero_spreads_over_pool():
    corpus, _ = gen_synthetic(GenParams(groups=1, docs_per_group=20,
                                        mentions_per_doc=10, noise_rate=0.0, seed=9),
                              SynthSchema(identity_focus=0.0))
    ids = {a.entity_id for doc in corpus for a in doc.annotations}
    assert len(ids) == 4


def test_groups_one_has_no_noise():
    corpus, _ = gen_synthetic(GenParams(groups=1, docs_per_group=10,
                                        mentions_per_doc=5, noise_rate=1.0, seed=2))
    assert all(a.entity_id is not None for doc in corpus for a in doc.annotations)


def test_generated_corpus_lints_clean():
    corpus, kb = gen_synthetic(GenParams(groups=3, docs_per_group=5,
                                         mentions_per_doc=6, noise_rate=0.3, seed=4))
    assert lint_corpus(io.StringIO(dump_corpus(corpus)), kb) == []


@pytest.mark.parametrize("bad", [
    GenParams(groups=0, docs_per_group=1, mentions_per_doc=1, noise_rate=0.0),
    GenParams(groups=1, docs_per_group=0, mentions_per_doc=1, noise_rate=0.0),
    GenParams(groups=1, docs_per_group=1, mentions_per_doc=0, noise_rate=0.0),
    GenParams(groups=1, docs_per_group=1, mentions_per_doc=1, noise_rate=-0.1),
    GenParams(groups=1, docs_per_group=1, mentions_per_doc=1, noise_rate=1.1),
])
def test_param_validation(bad):
    with pytest.raises(ValueError):
        gen_synthetic(bad)


@pytest.mark.parametrize("schema", [
    SynthSchema(entities_per_group=0),
    SynthSchema(aliases_per_entity=-1),
    SynthSchema(types_per_group=0),
    SynthSchema(identity_focus=1.5),
])
def test_schema_validation(schema):
    with pytest.raises(ValueError):
        gen_synthetic(GenParams(groups=1, docs_per_group=1, mentions_per_doc=1,
                                noise_rate=0.0), schema)


def test_planted_identity_rejects_foreign_ids():
    from necluster import Document
    with pytest.raises(ValueError):
        planted_identity(Document(doc_id="other", annotations=()))
    with pytest.raises(ValueError):
        planted_group(Document(doc_id="x", annotations=()))
