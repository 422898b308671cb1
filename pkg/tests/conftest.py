import numpy as np
import pytest

from pibox import LatticeGrid, MomentumExtension, PhysicalConfig, RobinParams


@pytest.fixture
def cfg():
    return PhysicalConfig(mass=1.0, box_length=1.0)


@pytest.fixture
def ext_i():
    """Extension parameters lambda = +i on both walls."""
    return MomentumExtension(1.0, 1.0)


@pytest.fixture
def grid9():
    return LatticeGrid(9, 1.0)


@pytest.fixture
def grid99():
    return LatticeGrid(99, 1.0)


@pytest.fixture
def robin2():
    return RobinParams(2.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
