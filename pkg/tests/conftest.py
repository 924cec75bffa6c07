import numpy as np
import pytest

from mibc.harness import ScenarioConfig

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ref_config():
    return ScenarioConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
