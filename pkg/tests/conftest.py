import os

import pytest
from hypothesis import settings as hypothesis_settings
from loguru import logger

from blochlab.analytic import make_pair
from blochlab.constants import AnalysisSettings, GridSpec
from blochlab.weights import weight_v3, weight_ve, weight_vlog, weight_wlog

SMALL_GRID = GridSpec(radial=64, angular=32)

ENV_VARS = ("BLOCHLAB_NMAX", "BLOCHLAB_GRID", "BLOCHLAB_TOL", "BLOCHLAB_THREADS")

# no per-example deadline: a single sup runs for milliseconds
hypothesis_settings.register_profile("blochlab", deadline=None, max_examples=25)
hypothesis_settings.load_profile("blochlab")


@pytest.fixture(autouse=True, scope="session")
def quiet_logs():
    logger.remove()
    handler = logger.add(lambda _: None, level="WARNING")
    yield
    logger.remove(handler)


@pytest.fixture(autouse=True, scope="session")
def clean_env():
    saved = {name: os.environ.pop(name) for name in ENV_VARS if name in os.environ}
    yield
    os.environ.update(saved)


@pytest.fixture
def grid():
    return SMALL_GRID


@pytest.fixture
def settings():
    return AnalysisSettings(nmax=16, grid=SMALL_GRID, tol=1e-6, threads=2, ladder_kmax=30, assoc_nmax=50)


@pytest.fixture
def v_log():
    return weight_vlog()


@pytest.fixture
def w_log():
    return weight_wlog()


@pytest.fixture
def v3():
    return weight_v3()


@pytest.fixture
def ve():
    return weight_ve()


@pytest.fixture
def identity_pair(grid):
    return make_pair("1", "z", grid)


@pytest.fixture
def contraction_pair(grid):
    return make_pair("1", "z/2", grid)


@pytest.fixture
def zero_pair(grid):
    return make_pair("0", "z", grid)


@pytest.fixture
def divergent_pair(grid):
    return make_pair("log(1 - z)", "z", grid)
