import math

import pytest

from zaremba.wedge import REGULAR, Robin

VERTICES = [REGULAR, Robin(-1.0), Robin(0.0), Robin(0.5), Robin(2.0), Robin(10.0)]


@pytest.fixture(params=VERTICES, ids=lambda v: "regular" if v == REGULAR else f"robin{v.s:g}")
def vertex(request):
    return request.param




_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Lines collected here are repeated in the terminal summary of every run."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].split("-")[1])):
            terminalreporter.write_line(line)
