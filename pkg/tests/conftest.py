import numpy as np
import pytest

from gkdna import linalg
from gkdna.cli import data_text
from gkdna.construct import build_generator, parse_grid
from gkdna.field import parse_dna_words, parse_matrix

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def example_grid():
    return parse_grid(data_text("example_grid.txt"))


@pytest.fixture(scope="session")
def example_gm(example_grid):
    return build_generator(example_grid)


@pytest.fixture(scope="session")
def example_code(example_gm):
    return linalg.reduce(example_gm.entries)


@pytest.fixture(scope="session")
def golden_matrix():
    return parse_matrix(data_text("example_matrix.txt"))


@pytest.fixture(scope="session")
def golden_rc():
    return set(parse_dna_words(data_text("example_rc_words.txt")))


@pytest.fixture(scope="session")
def golden_gc():
    return set(parse_dna_words(data_text("example_gc_words.txt")))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
