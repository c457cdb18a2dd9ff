import functools

import pytest
from hypothesis import HealthCheck, settings

from singular_systems.runner import run_scenario
from singular_systems.scenarios import RunConfig, get_scenario

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = {}


@functools.lru_cache(maxsize=None)
def scenario_run(name: str):
    """Solve a named scenario once per session."""
    return run_scenario(RunConfig(get_scenario(name)))


@pytest.fixture(scope="session")
def run_named():
    return scenario_run


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
