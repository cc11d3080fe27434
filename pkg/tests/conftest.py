"""Shared fixtures: hexagonal reference packings and random corpora.

The random corpora are session-scoped so that the per-module tests and
the acceptance gate share one set of generated packings and reports.
"""

import numpy as np
import pytest

from kissgeo.pipeline import (
    certify,
    hex_packing,
    random_radius2_packing,
    random_radius3_packing,
)

ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def hex_reports():
    return {n: certify(hex_packing(n), n) for n in (1, 2, 3)}


def make_random_packings(n_packings, base_seed=0):
    """Deterministic list of valid radius-<=3 packings of mixed size."""
    rng = np.random.default_rng(base_seed)
    out = []
    for k in range(n_packings):
        size = int(rng.integers(5, 22))
        out.append(random_radius3_packing(base_seed * 1000003 + k, size))
    return out


@pytest.fixture(scope="session")
def random3_packings():
    return make_random_packings(120, base_seed=1)


@pytest.fixture(scope="session")
def random3_reports(random3_packings):
    return [certify(p, 3) for p in random3_packings]


@pytest.fixture(scope="session")
def random2_packings():
    rng = np.random.default_rng(2)
    return [
        random_radius2_packing(7000 + k, int(rng.integers(4, 14)))
        for k in range(40)
    ]


@pytest.fixture(scope="session")
def point_sets():
    """Random planar point sets in general position for triangulation tests."""
    rng = np.random.default_rng(11)
    out = []
    for _ in range(60):
        n = int(rng.integers(4, 30))
        out.append(rng.uniform(-3.0, 3.0, (n, 2)))
    return out
