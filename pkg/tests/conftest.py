import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import matwalk as mw

settings.register_profile(
    "suite", max_examples=50, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def free_pair():
    return mw.free_semigroup_pair()


@pytest.fixture(scope="session")
def scalar_pair():
    return mw.scalar_exponential_pair()


@pytest.fixture(scope="session")
def rotating():
    return mw.rotating_diagonal_measure()


@pytest.fixture(scope="session")
def sl3_pair():
    return mw.shear_pair_sl3()


def random_invertible(rng, d):
    """Rejection-sampled well-conditioned random matrix."""
    while True:
        g = rng.normal(size=(d, d))
        s = np.linalg.svd(g, compute_uv=False)
        if s[-1] > 1e-6 * s[0]:
            return g
