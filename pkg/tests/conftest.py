import numpy as np
import pytest

from expfam import ExponentialFamily


def make_family(rng, n_max=50, d_max=8, stat_scale=2.0, n_min=2):
    """Random family: exponential-spacing base, uniform statistic entries."""
    n = int(rng.integers(n_min, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    base = rng.standard_exponential(n)
    base /= base.sum()
    statistic = rng.uniform(-stat_scale, stat_scale, (n, d))
    labels = tuple(f"y{i}" for i in range(n))
    return ExponentialFamily(labels=labels, base=base, statistic=statistic)


def make_simplex(rng, n):
    e = rng.standard_exponential(n)
    return e / e.sum()


def make_lam(rng, d, bound=3.0):
    return rng.uniform(-bound, bound, d)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
