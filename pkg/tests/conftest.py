import numpy as np
import pytest

from app.schemas.synthetic import SyntheticSpec
from app.services.synthetic_service import generate_synthetic


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_benchmark():
    """A quick synthetic benchmark: T=12, V=3, C=2, planted on signal 1."""
    spec = SyntheticSpec(
        T=12,
        V=3,
        C=2,
        planted=[
            {"signal": 1, "start": 2, "end": 5, "amplitude": 0.5},
            {"signal": 1, "start": 7, "end": 10, "amplitude": 0.5},
        ],
        noise_sigma=0.03,
        n_train=40,
        n_test=10,
        seed=3,
    )
    return generate_synthetic(spec)


@pytest.fixture(scope="session")
def planted_benchmark():
    """The default synthetic spec: T=30, V=8, C=3, 300 train / 100 test."""
    return generate_synthetic(SyntheticSpec(seed=7, signal_groups=[[0, 1, 2, 3], [4, 5]]))
