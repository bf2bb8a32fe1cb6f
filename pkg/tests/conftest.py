import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_image(rng):
    """Integer-valued 8-bit-range test image."""
    def make(h, w, seed=None):
        r = rng if seed is None else np.random.default_rng(seed)
        return np.floor(r.uniform(0.0, 256.0, (h, w)))
    return make
