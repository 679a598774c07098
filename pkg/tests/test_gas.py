import numpy as np
import pytest
from hypothesis import given, strategies as st

from compwave.gas import (GasParams, State, lambda1, lambda2, potential_Q,
                          pressure, pressure_derivative, relative_Q,
                          relative_eta, relative_p)


volumes = st.floats(min_value=0.05, max_value=20.0,
                    allow_nan=False, allow_infinity=False)


def test_pressure_basics(gas):
    assert pressure(gas, 1.0) == 1.0
    assert pressure(gas, 2.0) == pytest.approx(2.0 ** -1.4, rel=1e-15)
    v = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(pressure(gas, v), v ** -1.4, rtol=1e-15)


def test_pressure_derivative_matches_fd(gas):
    v = np.linspace(0.3, 3.0, 40)
    h = 1e-6
    fd = (pressure(gas, v + h) - pressure(gas, v - h)) / (2 * h)
    np.testing.assert_allclose(pressure_derivative(gas, v), fd, rtol=1e-8)


def test_characteristic_speeds(gas):
    """lambda2 = sqrt(-p'(v)) = sqrt(gamma) v^{-(gamma+1)/2}, lambda1 = -lambda2."""
    v = np.array([0.5, 0.7, 1.0, 1.5])
    lam2 = lambda2(gas, v)
    np.testing.assert_allclose(lam2, np.sqrt(-pressure_derivative(gas, v)),
                               rtol=1e-14)
    np.testing.assert_allclose(lambda1(gas, v), -lam2, rtol=1e-14)
    assert lambda2(gas, 1.0) == pytest.approx(np.sqrt(1.4), rel=1e-15)


def test_gas_validation():
    with pytest.raises(ValueError):
        GasParams(gamma=1.0)
    with pytest.raises(ValueError):
        GasParams(gamma=2.5, alpha=1.0)   # gamma > alpha + 1
    with pytest.raises(ValueError):
        GasParams(gamma=1.4, alpha=0.0)
    g = GasParams(gamma=1.4, alpha=1.0)
    assert g.beta == pytest.approx(0.4)
    assert g.b_coef == pytest.approx(1.4)


def test_state_validation():
    with pytest.raises(ValueError):
        State(-1.0, 0.0)
    with pytest.raises(ValueError):
        State(1.0, 0.0, kind="w")
    assert State(1.0, 0.3).u == 0.3


def test_potential_is_antiderivative_of_minus_p(gas):
    v = np.linspace(0.4, 2.5, 30)
    h = 1e-6
    dQ = (potential_Q(gas, v + h) - potential_Q(gas, v - h)) / (2 * h)
    np.testing.assert_allclose(dQ, -pressure(gas, v), rtol=1e-8)


@given(v=volumes, w=volumes)
def test_relative_Q_is_bregman_gap(v, w):
    """Q(v|w) = Q(v) - Q(w) + p(w)(v - w), nonnegative by convexity of Q."""
    gas = GasParams(gamma=1.4)
    direct = (potential_Q(gas, v) - potential_Q(gas, w)
              + pressure(gas, w) * (v - w))
    got = float(relative_Q(gas, v, w))
    assert got == pytest.approx(direct, rel=1e-12, abs=1e-15)
    assert got >= -1e-15


@given(v=volumes, w=volumes)
def test_relative_p_nonnegative(v, w):
    gas = GasParams(gamma=1.4)
    direct = (pressure(gas, v) - pressure(gas, w)
              - pressure_derivative(gas, w) * (v - w))
    got = float(relative_p(gas, v, w))
    assert got == pytest.approx(direct, rel=1e-12, abs=1e-15)
    assert got >= -1e-15


def test_relative_quantities_vanish_on_diagonal(gas):
    v = np.linspace(0.3, 3.0, 17)
    assert np.max(np.abs(relative_Q(gas, v, v))) == 0.0
    assert np.max(np.abs(relative_p(gas, v, v))) == 0.0


@given(v=volumes, w=volumes,
       du=st.floats(min_value=-3, max_value=3, allow_nan=False))
def test_relative_eta_splits(v, w, du):
    """eta(U1|U2) = (u1-u2)^2/2 + Q(v1|v2)."""
    gas = GasParams(gamma=1.4)
    got = float(relative_eta(gas, State(v, 1.0 + du), State(w, 1.0)))
    want = 0.5 * du * du + float(relative_Q(gas, v, w))
    assert got == pytest.approx(want, rel=1e-12, abs=1e-15)
    assert got >= -1e-15


def test_relative_Q_quadratic_near_diagonal(gas):
    # second-order Taylor: Q(v|w) ~ -p'(w)/2 (v-w)^2
    w = 0.9
    for d in (1e-3, 1e-4):
        got = float(relative_Q(gas, w + d, w))
        want = -0.5 * float(pressure_derivative(gas, w)) * d * d
        assert got == pytest.approx(want, rel=5 * d)
