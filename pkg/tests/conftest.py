import os

import numpy as np
import pytest

from granpack import granulometry as gran

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SAMPLE1 = os.path.join(ROOT, "data", "sample1.csv")

# acceptance outcomes, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def sample1_path():
    return SAMPLE1


@pytest.fixture(scope="session")
def sample1_curve():
    return gran.read_curve(SAMPLE1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
