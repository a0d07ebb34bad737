"""Shared fixtures.

The certificate suite and the critical-point solves are the two expensive
pieces, so both are computed once per session and handed out to whichever
test asks.  Everything else is cheap enough to build inline.
"""

import json
import os
import time

import pytest

from yahil import certify, shoot

HERE = os.path.dirname(__file__)


@pytest.fixture(scope="session")
def frozen():
    """Reference data frozen by tests/oracles/highprec.py (committed)."""
    with open(os.path.join(HERE, "oracles", "frozen.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def cert_run():
    """One full run of the certificate suite: (results, wall seconds)."""
    t0 = time.perf_counter()
    results = certify.run_suite()
    return results, time.perf_counter() - t0


class SolveCache:
    def __init__(self):
        self._memo = {}
        self.seconds = {}

    def __call__(self, gamma):
        if gamma not in self._memo:
            t0 = time.perf_counter()
            self._memo[gamma] = shoot.solve(gamma)
            self.seconds[gamma] = time.perf_counter() - t0
        return self._memo[gamma]


@pytest.fixture(scope="session")
def solve_for():
    """Memoised critical-point solver, shared across modules."""
    return SolveCache()
