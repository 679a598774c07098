import numpy as np
import pytest

from compwave.gas import GasParams
from compwave.riemann import RiemannSetup
from compwave.shock_profile import build_profile
from compwave.rarefaction import RarefactionParams


DEFAULT_TRIPLE = (1.0, 0.8, 0.7)


@pytest.fixture(scope="session")
def gas():
    return GasParams(gamma=1.4, alpha=1.0)


@pytest.fixture(scope="session")
def setup(gas):
    v_minus, v_mid, v_plus = DEFAULT_TRIPLE
    return RiemannSetup(gas, v_minus, v_mid, v_plus, u_minus=0.0)


@pytest.fixture(scope="session")
def profile(gas, setup):
    return build_profile(gas, setup)


@pytest.fixture(scope="session")
def rparams(gas, setup):
    a = np.sqrt(0.05)
    return RarefactionParams(gas, setup.v_mid, setup.v_plus, setup.u_mid, a)
