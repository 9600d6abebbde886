import hypothesis
import numpy as np
import pytest

from markovdual import RateMatrix

hypothesis.settings.register_profile(
    "default", max_examples=25, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")


def random_generator(rng: np.random.Generator, n: int) -> RateMatrix:
    """Dense random generator with uniform rates."""
    m = rng.random((n, n))
    np.fill_diagonal(m, 0.0)
    np.fill_diagonal(m, -m.sum(axis=1))
    return RateMatrix.from_entries(m)


def random_birth_death(rng: np.random.Generator, n: int, lo: float = 0.5, hi: float = 2.0) -> RateMatrix:
    """Random tridiagonal (birth-death) generator with rates in [lo, hi]."""
    up = rng.uniform(lo, hi, n - 1)
    down = rng.uniform(lo, hi, n - 1)
    m = np.diag(up, 1) + np.diag(down, -1)
    np.fill_diagonal(m, -m.sum(axis=1))
    return RateMatrix.from_entries(m)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
