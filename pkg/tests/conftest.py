from __future__ import annotations

import math

import numpy as np
import pytest

from trigcoef.handles import FunctionHandle


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def handle(fn, **kw) -> FunctionHandle:
    return FunctionHandle.from_callable(fn, **kw)


@pytest.fixture
def cos_handle():
    return handle(math.cos, name="cos")


#: one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
