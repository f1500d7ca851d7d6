import sys
from pathlib import Path

import pytest

from pddlbench.dataset import bundled_corpus, load_example

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def jungle():
    return load_example(bundled_corpus() / "jungle")


@pytest.fixture(scope="session")
def gold(jungle):
    return jungle.domain


@pytest.fixture(scope="session")
def escape(jungle):
    return jungle.problems[0]


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
