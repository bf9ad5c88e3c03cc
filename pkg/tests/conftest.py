"""Shared fixtures: a session log that echoes acceptance verdicts.

Acceptance tests append one line per criterion; the terminal summary
repeats them after the run so the verdict survives output capture.
"""

import pytest

_acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
