import os

import pytest
from hypothesis import HealthCheck, settings

from cuspforge.series import AVAILABLE_BACKENDS, get_backend, set_backend

settings.register_profile(
    "pinned",
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("CFORGE_HYPOTHESIS_PROFILE", "pinned"))

ACCEPTANCE_LINES = {}


@pytest.fixture(params=AVAILABLE_BACKENDS)
def backend(request):
    previous = set_backend(request.param)
    yield request.param
    set_backend(previous)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (len(k), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
    terminalreporter.write_line(f"series backend at exit: {get_backend()}")
