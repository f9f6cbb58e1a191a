import time

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("workbench", max_examples=40, deadline=None)
settings.load_profile("workbench")

SESSION = {"start": None}
# criterion number -> (passed, summary line)
ACCEPTANCE = {}


def pytest_sessionstart(session):
    SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(config, items):
    # acceptance criteria run last so the wall-time criterion sees the whole suite
    items.sort(key=lambda item: item.get_closest_marker("acceptance") is not None)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {line}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
