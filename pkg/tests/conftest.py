"""Shared fixtures and the acceptance-criteria report.

Acceptance tests register a one-line verdict per criterion; the lines are
printed in a dedicated section of the terminal summary so the pass/fail
status of every criterion is visible even when output capture is on.
"""

import numpy as np
import pytest

_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    _criterion_lines.append(line)


@pytest.fixture
def criterion_report():
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criterion_lines):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
