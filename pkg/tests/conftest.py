import numpy as np
import pytest

from quatlift import make_space
from quatlift.lattice_lift import LatticeSpec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n={n}")
def space(request):
    return make_space(request.param, 1)


@pytest.fixture
def desk():
    """Default instance: E = Q(i), n = 1, standard lattice."""
    sp = make_space(1, 1)
    return sp, LatticeSpec.standard(sp)
