import functools
import time

import pytest

from tangency_lab.cli import incidence_pairs
from tangency_lab.incidence import generate_grid_system, shear_normalize
from tangency_lab.synthesis import synthesize
from tangency_lab.verifier import tangency_report

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def pipeline(k, grounded=False):
    """(system, family, report, seconds) for the sheared grid system of size k."""
    t0 = time.perf_counter()
    sys_ = shear_normalize(generate_grid_system(k))
    family = synthesize(sys_, grounded=grounded)
    report = tangency_report(family)
    return sys_, family, report, time.perf_counter() - t0


@pytest.fixture
def run_pipeline():
    return pipeline


@pytest.fixture
def expected_pairs():
    return incidence_pairs


def record(criterion, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
