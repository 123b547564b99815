import time
from contextlib import contextmanager

import pytest

_acceptance_lines = []


@pytest.fixture
def criterion():
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""

    @contextmanager
    def run(num, summary):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException:
            _acceptance_lines.append("AC%-2d FAIL  %s" % (num, summary))
            raise
        dt = time.perf_counter() - t0
        _acceptance_lines.append("AC%-2d PASS  (%.1fs)  %s" % (num, dt, summary))

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
