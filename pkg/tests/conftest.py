import os
import random

import pytest
from hypothesis import HealthCheck, settings

SEED = int(os.environ.get("HECKE_FORGE_SEED", "0"))

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(SEED)
