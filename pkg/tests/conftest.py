"""
Shared pytest fixtures and the slow-test switch
"""
import random
import sys
from pathlib import Path

import pytest

# The code base uses root-relative imports (config.settings, model.*)
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from model.words import Word


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the long acceptance runs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long acceptance run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return random.Random(20160601)


def random_word(rng: random.Random, max_length: int, cyclic: bool = True) -> Word:
    """Random reduced (optionally cyclically reduced) nonempty word"""
    while True:
        length = rng.randint(1, max_length)
        letters = []
        for _ in range(length):
            choices = [c for c in range(4) if not letters or c != letters[-1] ^ 1]
            letters.append(rng.choice(choices))
        word = Word(letters)
        if cyclic and len(word) > 1 and word.letters[0] == word.letters[-1] ^ 1:
            continue
        if word:
            return word
