import functools

import pytest
from hypothesis import HealthCheck, settings

from suppvar.fixtures import fixture

settings.register_profile("suppvar", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suppvar")


@functools.lru_cache(maxsize=None)
def algebra(name, char=None):
    return fixture(name, char)


@pytest.fixture(scope="session")
def get_algebra():
    return algebra


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
