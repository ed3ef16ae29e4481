from pathlib import Path

import pytest

from chemsearch.corpus import load_corpus
from chemsearch.search import Engine
from chemsearch.snapshot import build_snapshot

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def minicorpus_dir() -> Path:
    return FIXTURES / "minicorpus"


@pytest.fixture(scope="session")
def fixture_molecules() -> list[str]:
    lines = (FIXTURES / "molecules.txt").read_text().splitlines()
    return [l.strip() for l in lines if l.strip() and not l.startswith("#")]


@pytest.fixture(scope="session")
def corpus(minicorpus_dir):
    return load_corpus(minicorpus_dir)


@pytest.fixture(scope="session")
def snapshot(corpus):
    return build_snapshot(corpus)


@pytest.fixture(scope="session")
def engine(snapshot) -> Engine:
    return Engine(snapshot.corpus, snapshot.links, snapshot.text_index)
