import numpy as np
import pytest
from hypothesis import settings, strategies as st

from gtbias.partition import from_labels

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@st.composite
def partition_pairs(draw, max_n=60, max_k=8):
    n = draw(st.integers(2, max_n))
    u = draw(st.lists(st.integers(0, max_k - 1), min_size=n, max_size=n))
    v = draw(st.lists(st.integers(0, max_k - 1), min_size=n, max_size=n))
    return from_labels(u), from_labels(v)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
