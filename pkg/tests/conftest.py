import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from src.data.cache import clear_generator_cache

settings.register_profile("ergolab", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow])
settings.load_profile("ergolab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(autouse=True)
def fresh_generator_cache():
    clear_generator_cache()
    yield
