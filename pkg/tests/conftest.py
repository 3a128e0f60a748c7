from pathlib import Path

import pytest

from necluster import GenParams, gen_synthetic, load_corpus, load_kb

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def kb():
    return load_kb(FIXTURES / "kb.json")


@pytest.fixture(scope="session")
def corpus(kb):
    return load_corpus(FIXTURES / "corpus.jsonl", kb)


@pytest.fixture(scope="session")
def synth7():
    """The reference synthetic corpus: 3 groups, 20 docs each, seed 7."""
    return gen_synthetic(GenParams(groups=3, docs_per_group=20,
                                   mentions_per_doc=10, noise_rate=0.1, seed=7))


@pytest.fixture()
def kb_path():
    return str(FIXTURES / "kb.json")


@pytest.fixture()
def corpus_path():
    return str(FIXTURES / "corpus.jsonl")
