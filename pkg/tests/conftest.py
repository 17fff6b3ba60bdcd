import numpy as np
import pytest

from paraglm import StepperConfig, pendulum


@pytest.fixture
def pend():
    return pendulum()


@pytest.fixture
def cfg():
    return StepperConfig(h=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
