import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from itsrobust.core import Coding, InterventionSpec, TimeSeries  # noqa: E402

_CRITERIA_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(id, passed, detail)``."""
    lines = request.config.stash[_CRITERIA_KEY]

    def record(cid: str, passed: bool, detail: str) -> bool:
        lines.append(f"[{'PASS' if passed else 'FAIL'}] criterion {cid}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def table1_series():
    t = np.arange(1, 17, dtype=float)
    return TimeSeries(t, 4 + 4 * t)


@pytest.fixture
def spec9():
    return InterventionSpec(9, Coding.CENTERED)
