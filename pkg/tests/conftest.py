import numpy as np
import pytest

from belavin.face import WeightVector, sample_delta
from belavin.vertex import sample_box, sample_params

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def params(n, seed=0, **kw):
    return sample_params(n, np.random.default_rng(seed), **kw)


def weights(n, rng, k=3):
    delta = sample_delta(n, rng)
    return [WeightVector(tuple(rng.integers(-3, 4, n)), delta) for _ in range(k)]


def points(rng, k):
    return sample_box(rng, k)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
