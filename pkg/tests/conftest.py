import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from dtcalc import fixtures
from dtcalc.rng import Lcg64

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def rng_for(seed):
    return Lcg64(seed)


@pytest.fixture
def p2():
    return fixtures.projective(2)


@pytest.fixture
def node():
    return fixtures.node()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
