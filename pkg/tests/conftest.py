import numpy as np
import pytest

from bethe_sp.params import RATIONAL, TRIGONOMETRIC, ModelParams
from bethe_sp.sampling import random_params

VARIANTS = [(RATIONAL, 1.0), (TRIGONOMETRIC, 0.5j), (TRIGONOMETRIC, 0.3 + 0.4j)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=VARIANTS, ids=["xxx", "xxz-imag", "xxz-complex"])
def variant_eta(request):
    return request.param


def make_params(rng, n, variant=RATIONAL, eta=1.0) -> ModelParams:
    return random_params(rng, n, variant, eta)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / (scale if scale > 0 else 1.0))
