import numpy as np
import pytest

from hfbgeo.control_plane.config import build_config
from hfbgeo.core.orbitgeo import BasePoint
from hfbgeo.execution_plane.common import console


@pytest.fixture(autouse=True)
def quiet_console():
    console.set_quiet(True)
    yield
    console.set_quiet(False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_config():
    """ExperimentConfig from flag-style overrides, no environment."""
    def make(command="suite", **flags):
        return build_config(command, None, flags, env={})
    return make


@pytest.fixture
def base_04():
    """n = 4 around diag(0.4, 0.4, 0, 0)."""
    return BasePoint.from_spectrum((0.4, 0.0), 4)


@pytest.fixture
def base_half():
    """n = 3 around diag(0.5, 0.3, 0) with a lambda = 1/2 block."""
    return BasePoint.from_spectrum((0.5, 0.3, 0.0), 3)
