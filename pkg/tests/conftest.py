import numpy as np
import pytest

from imagecipher.models import Image
from imagecipher.schemas import CipherConfig, CipherKeys


@pytest.fixture
def keys():
    """Key pair used for the published results"""
    return CipherKeys(a=0.3905, k=3.9886)


@pytest.fixture
def config():
    return CipherConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


@pytest.fixture
def random_image(rng):
    """Factory for uniformly random images"""
    def make(width, height, channels=1):
        return Image(rng.integers(0, 256, size=(height, width, channels), dtype=np.uint8))
    return make
