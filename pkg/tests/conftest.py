import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from cosetforge.abelian import GroupSpec
from cosetforge.partition import Partition

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def partitions(draw, max_parts=6, max_part=6):
    parts = draw(st.lists(st.integers(1, max_part), max_size=max_parts))
    return Partition(sorted(parts, reverse=True))


@st.composite
def small_groups(draw, max_order=64):
    p = draw(st.sampled_from([2, 3]))
    parts = []
    order = 1
    for _ in range(draw(st.integers(0, 6))):
        a = draw(st.integers(1, 3))
        if order * p ** a > max_order:
            break
        parts.append(a)
        order *= p ** a
    return GroupSpec(p, sorted(parts, reverse=True))


def element_of(G):
    return st.tuples(*(st.integers(0, m - 1) for m in G.moduli))


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def record_criterion(request):
    """Collects acceptance lines so they are printed together at the end."""
    lines = request.config.stash.setdefault(_CRITERIA, [])
    return lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
