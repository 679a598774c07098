import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compwave.errors import ConfigError
from compwave.gas import GasParams, State, lambda1, lambda2, pressure
from compwave.riemann import (RiemannSetup, STRENGTH_RATIO_WARN, hugoniot_state,
                              rc2_velocity, riemann_sample, shock_speed,
                              solve_intermediate)

import oracles


def rh_residuals(gas, setup):
    """Both Rankine-Hugoniot conditions across the 1-shock."""
    s = setup.sigma1
    r1 = -s * (setup.v_mid - setup.v_minus) - (setup.u_mid - setup.u_minus)
    r2 = (-s * (setup.u_mid - setup.u_minus)
          + float(pressure(gas, setup.v_mid)) - float(pressure(gas, setup.v_minus)))
    return abs(r1), abs(r2)


triples = st.tuples(
    st.floats(min_value=1.21, max_value=2.0),      # gamma (alpha = 1 fixed)
    st.floats(min_value=0.4, max_value=2.5),       # v_minus
    st.floats(min_value=0.55, max_value=0.95),     # v_mid / v_minus
    st.floats(min_value=0.6, max_value=1.0),       # v_plus / v_mid
    st.floats(min_value=-1.0, max_value=1.0),      # u_minus
)


def make_setup(args):
    gamma, v_minus, r_mid, r_plus, u_minus = args
    gas = GasParams(gamma=gamma, alpha=1.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return gas, RiemannSetup(gas, v_minus, r_mid * v_minus,
                                 r_plus * r_mid * v_minus, u_minus)


def test_default_triple_derived_values(setup):
    """Frozen reference numbers for the standard configuration."""
    assert setup.sigma1 == pytest.approx(-1.3540727314828727, abs=1e-13)
    assert setup.u_mid == pytest.approx(-0.2708145462965745, abs=1e-13)
    assert setup.u_plus == pytest.approx(-0.10338137633875899, abs=1e-13)
    assert setup.eps1 == pytest.approx(0.3667025924290974, abs=1e-13)
    assert setup.eps2 == pytest.approx(0.2809389901164072, abs=1e-13)
    assert setup.eps == pytest.approx(setup.eps1 * setup.eps2, rel=1e-15)


def test_rankine_hugoniot_exact(gas, setup):
    r1, r2 = rh_residuals(gas, setup)
    assert r1 <= 1e-14
    assert r2 <= 1e-14


@given(triples)
def test_rh_and_lax_admissibility(args):
    gas, setup = make_setup(args)
    r1, r2 = rh_residuals(gas, setup)
    assert r1 <= 1e-12
    assert r2 <= 1e-12
    # 1-shock: sigma < 0 and Lax inequalities lambda1(v_mid) < sigma < lambda1(v_minus)
    assert setup.sigma1 < 0.0
    assert float(lambda1(gas, setup.v_mid)) < setup.sigma1 < float(lambda1(gas, setup.v_minus))


def test_shock_speed_formula(gas):
    v0, v1 = 1.0, 0.8
    s = shock_speed(gas, v0, v1)
    want = -np.sqrt((float(pressure(gas, v1)) - float(pressure(gas, v0))) / (v0 - v1))
    assert s == pytest.approx(want, rel=1e-15)
    with pytest.raises(ValueError):
        shock_speed(gas, 0.8, 1.0)   # not a compression


def test_hugoniot_state_consistency(gas, setup):
    got = hugoniot_state(gas, State(setup.v_minus, setup.u_minus), setup.v_mid)
    assert got.v == pytest.approx(setup.v_mid, rel=1e-15)
    assert got.u == pytest.approx(setup.u_mid, rel=1e-13)


def test_rc2_velocity_closed_form(gas):
    """u along the 2-curve: du/dv = -lambda2, checked against quadrature."""
    from scipy.integrate import quad
    v_from, v_to, u_from = 0.8, 0.65, -0.27
    got = float(rc2_velocity(gas, State(v_from, u_from), v_to))
    q, _ = quad(lambda s: -float(lambda2(gas, s)), v_from, v_to)
    assert got == pytest.approx(u_from + q, abs=1e-12)


@given(triples)
@settings(max_examples=60)
def test_solve_intermediate_round_trip(args):
    gas, setup = make_setup(args)
    v_rec, residual = solve_intermediate(gas, setup.U_minus, setup.U_plus)
    assert abs(v_rec - setup.v_mid) <= 1e-10
    assert abs(residual) <= 1e-10


def test_from_states(gas, setup):
    rebuilt = RiemannSetup.from_states(gas, setup.U_minus, setup.U_plus)
    assert rebuilt.v_mid == pytest.approx(setup.v_mid, abs=1e-11)
    assert rebuilt.sigma1 == pytest.approx(setup.sigma1, abs=1e-10)


def test_ordering_rejected(gas):
    with pytest.raises(ConfigError):
        RiemannSetup(gas, 0.8, 1.0, 0.7)
    with pytest.raises(ConfigError):
        RiemannSetup(gas, 1.0, 0.8, -0.1)


def test_strength_ratio_warning(gas):
    with pytest.warns(UserWarning, match="rarefaction strength"):
        RiemannSetup(gas, 1.0, 0.98, 0.5)
    assert STRENGTH_RATIO_WARN == 3.0


class TestSampler:
    def test_initial_data(self, setup):
        x = np.array([-1.0, -1e-12, 0.0, 1.0])
        v, u = riemann_sample(setup, 0.0, x)
        np.testing.assert_allclose(v, [1.0, 1.0, 0.7, 0.7], rtol=0)
        np.testing.assert_allclose(u, [0.0, 0.0, setup.u_plus, setup.u_plus], rtol=0)

    def test_self_similarity(self, setup):
        x = np.linspace(-2, 2, 201)
        v1, u1 = riemann_sample(setup, 1.0, x)
        v2, u2 = riemann_sample(setup, 2.0, 2 * x)
        np.testing.assert_allclose(v1, v2, rtol=1e-14)
        np.testing.assert_allclose(u1, u2, rtol=0, atol=1e-14)

    def test_regions_and_fan_continuity(self, gas, setup):
        t = 0.5
        lam_mid = float(lambda2(gas, setup.v_mid))
        lam_plus = float(lambda2(gas, setup.v_plus))
        v, u = riemann_sample(setup, t, np.array([setup.sigma1 * t - 0.01]))
        assert v[0] == setup.v_minus and u[0] == setup.u_minus
        v, u = riemann_sample(setup, t, np.array([setup.sigma1 * t + 0.01]))
        assert v[0] == setup.v_mid
        # continuity at the fan edges
        for s_edge, v_edge in ((lam_mid, setup.v_mid), (lam_plus, setup.v_plus)):
            vv, _ = riemann_sample(setup, t, t * s_edge + np.array([-1e-9, 1e-9]))
            np.testing.assert_allclose(vv, v_edge, rtol=1e-6)

    def test_fan_interior_solves_selfsimilar_ode(self, gas, setup):
        """Inside the fan, lambda2(v(x/t)) = x/t."""
        t = 0.5
        lam_mid = float(lambda2(gas, setup.v_mid))
        lam_plus = float(lambda2(gas, setup.v_plus))
        s = np.linspace(lam_mid + 1e-6, lam_plus - 1e-6, 33)
        v, u = riemann_sample(setup, t, s * t)
        np.testing.assert_allclose(lambda2(gas, v), s, rtol=1e-13)
        # velocity follows the 2-curve from the intermediate state
        np.testing.assert_allclose(u, rc2_velocity(gas, setup.U_mid, v), rtol=1e-13)

    def test_scalar_call(self, setup):
        v, u = riemann_sample(setup, 0.4, -1.0)
        assert isinstance(v, float) and v == setup.v_minus

    def test_negative_time_rejected(self, setup):
        with pytest.raises(ValueError):
            riemann_sample(setup, -0.1, np.array([0.0]))


def test_sampler_vs_lax_friedrichs(gas, setup):
    """Independent first-order scheme converges to the sampled solution."""
    t = 0.4
    errs = []
    for dx in (1 / 200, 1 / 400):
        xc, v_lf, _u_lf = oracles.lax_friedrichs_p_system(
            gas.gamma, setup.v_minus, setup.u_minus, setup.v_plus, setup.u_plus,
            t, dx)
        v_ex, _ = riemann_sample(setup, t, xc)
        errs.append(float(np.sum(np.abs(v_lf - v_ex)) * dx))
    assert errs[0] <= 0.05
    assert errs[1] < errs[0]
