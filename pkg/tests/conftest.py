"""Shared fixtures for the HyperChua test suite"""

import pytest

from src.models.chua_model import ChuaParams
from src.scenarios.regime_manager import RegimeManager
from src.simulation.integrator import IntegratorSettings


@pytest.fixture
def regimes():
    return RegimeManager()


@pytest.fixture
def beta20():
    """alpha = 10, beta = 20 with the negative-I0 diode"""
    return ChuaParams(alpha=10.0, beta=20.0, g0=-0.75 + 0.7875, I0=-0.7875)


@pytest.fixture
def beta13():
    """alpha = 10, beta = 13.3 with the passive 1N4007 pair"""
    return ChuaParams(alpha=10.0, beta=13.3, g0=-1.07 - 0.0003, I0=0.0003)


@pytest.fixture
def origin_stable():
    """g0 + I0 = 0.5 with I0 > 0: the origin attracts everything"""
    return ChuaParams(alpha=10.0, beta=13.3, g0=0.5 - 0.0003, I0=0.0003)


@pytest.fixture
def divergent():
    """g0 + I0 = -1.5 with I0 < 0: trajectories leave every bounded set"""
    return ChuaParams(alpha=10.0, beta=20.0, g0=-1.5 + 0.7875, I0=-0.7875)


@pytest.fixture
def quick():
    """Short integration windows for tests that only need qualitative behavior"""
    return IntegratorSettings(rtol=1e-8, atol=1e-10, t_transient=20.0, t_sample=20.0)
