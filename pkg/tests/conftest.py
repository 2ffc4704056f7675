import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

from bialg.poincare import make_inhomogeneous, poincare  # noqa: E402


@pytest.fixture(scope="session")
def A():
    return poincare()


@pytest.fixture(scope="session")
def g(A):
    return A.algebra


small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def signatures():
    return [(1, 2), (2, 1), (3, 0), (1, 3), (2, 2), (4, 0)]


def algebra_for(p, q):
    return make_inhomogeneous(p, q)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
