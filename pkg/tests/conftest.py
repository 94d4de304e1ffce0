from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from ambitoric.exactmath import Quadratic, Quartic
from ambitoric.structures import bach_flat_example

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def rationals(lo=-20, hi=20, max_den=12):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


quadratics = st.builds(Quadratic, rationals(), rationals(), rationals())
quartics = st.builds(Quartic, rationals(), rationals(), rationals(), rationals(), rationals())


@pytest.fixture
def example():
    return bach_flat_example()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get("acceptance", None) if hasattr(config, "stash") else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
