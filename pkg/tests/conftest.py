from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hgfrob.hgdata import build

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def datum():
    """The degree-2 weight-1 datum used throughout."""
    return build([F(1, 3), F(2, 3)], [F(1, 4), F(3, 4)])


@pytest.fixture(scope="session")
def rank_one():
    return build([F(1, 2)], [F(0)])


@pytest.fixture(scope="session")
def quintic():
    return build([F(k, 5) for k in range(1, 5)], [F(0)] * 4)


@pytest.fixture(scope="session")
def fixture_path():
    return DATA_DIR / "fixtures.jsonl"


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
