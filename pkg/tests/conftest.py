import json
from functools import lru_cache
from pathlib import Path

import pytest

from cellkit import build_kl_table, build_system, compute_cells

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def system(spec):
    return build_system(spec)


@lru_cache(maxsize=None)
def table(spec):
    return build_kl_table(system(spec))


@lru_cache(maxsize=None)
def cells(spec):
    return compute_cells(system(spec), table(spec))


@pytest.fixture(scope="session")
def golden():
    return json.loads((DATA / "golden_cells_B3_B4.json").read_text())


@pytest.fixture(scope="session")
def B3():
    return system("B3"), table("B3"), cells("B3")


@pytest.fixture(scope="session")
def B4():
    return system("B4"), table("B4"), cells("B4")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
