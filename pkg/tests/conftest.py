import random

import pytest
from hypothesis import strategies as st

from lletrec.corpus import corpus
from lletrec.generate import random_productive_term, random_term

ACCEPTANCE_LINES: list[str] = []


def closed_terms(max_size: int = 15) -> st.SearchStrategy:
    return st.integers(0, 2**32 - 1).map(lambda seed: random_term(random.Random(seed), max_size))


def productive_terms(max_size: int = 15) -> st.SearchStrategy:
    return st.integers(0, 2**32 - 1).map(lambda seed: random_productive_term(random.Random(seed), max_size))


@pytest.fixture(scope="session")
def named():
    return corpus()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
