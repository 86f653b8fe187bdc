import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def disk_values(max_modulus=0.8, min_size=1, max_size=16):
    """Complex numbers with modulus <= max_modulus."""
    point = st.tuples(st.floats(0, max_modulus), st.floats(0, 2 * np.pi)).map(lambda t: t[0] * np.exp(1j * t[1]))
    return st.lists(point, min_size=min_size, max_size=max_size)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_alpha(rng, n, max_modulus=0.8):
    return max_modulus * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
