import numpy as np
import pytest
from hypothesis import settings, strategies as st

from coolbound import _backend, _kernels_py

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

BACKENDS = [_kernels_py]
if _backend.COMPILED:
    BACKENDS.insert(0, _backend.kernels)


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@st.composite
def prob_vectors(draw, min_dim=2, max_dim=6):
    n = draw(st.integers(min_dim, max_dim))
    w = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=n, max_size=n))
    w = np.asarray(w) + 1e-3
    return w / w.sum()


@st.composite
def ladders(draw, min_dim=2, max_dim=6, max_gap=2.0):
    n = draw(st.integers(min_dim, max_dim))
    gaps = draw(st.lists(st.floats(0.05, max_gap), min_size=n - 1, max_size=n - 1))
    return np.concatenate([[0.0], np.cumsum(gaps)])


betas = st.floats(0.0, 5.0, allow_nan=False)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
