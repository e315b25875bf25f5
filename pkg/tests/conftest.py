import numpy as np
import pytest
from hypothesis import settings

from legendrian import catalog

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def greatcircle():
    return catalog.get("greatcircle-j-s3").loop


@pytest.fixture(scope="session")
def unknot():
    return catalog.get("unknot-r3").loop


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
