from pathlib import Path

import pytest

from ppcat.classifier import Classifier
from ppcat.grammar import default_pp_grammar
from ppcat.wordnet import default_index

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def wn():
    return default_index()


@pytest.fixture(scope="session")
def grammar():
    return default_pp_grammar()


@pytest.fixture(scope="session")
def classifier(wn):
    return Classifier(wn)


@pytest.fixture
def fixtures_dir():
    return FIXTURES
