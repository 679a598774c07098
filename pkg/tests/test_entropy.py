import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compwave.entropy import (FunctionalFrame, WeightParams, compute_F,
                              evaluate_functionals, identity_residual,
                              interaction_diagnostics, nonnegativity_violations,
                              truncate_vbar, truncate_vk, weight,
                              weight_derivative)
from compwave.gas import GasParams
from compwave.harness import auto_domain, build_wave
from compwave.solver import composite_eval


NU = 0.05
LAM = 0.1


@pytest.fixture(scope="module")
def cw():
    return build_wave({"gamma": 1.4, "alpha": 1.0},
                      {"v_minus": 1.0, "v_mid": 0.8, "v_plus": 0.7,
                       "u_minus": 0.0},
                      NU, np.sqrt(NU))


@pytest.fixture(scope="module")
def grid(cw):
    return auto_domain(cw, 1.0, 0.1)


@pytest.fixture(scope="module")
def frame(cw, grid):
    tau, X = 0.5, -0.05
    cf = cw.eval(tau, grid.ys, X)
    wp = WeightParams(profile=cw.profile, lam=LAM)
    return FunctionalFrame(cw.gas, grid.ys, grid.dy, cf, wp,
                           cw.setup.sigma1, cw.setup.eps1, cw.setup.eps2)


def perturbed_state(frame, rng, amp=0.02):
    """Composite state plus smooth random bumps."""
    ys = frame.ys
    v = frame.cf.vt.copy()
    h = frame.cf.ht.copy()
    for _ in range(3):
        c = rng.uniform(-20, 20)
        wdt = rng.uniform(0.5, 3.0)
        b = np.exp(-0.5 * ((ys - c) / wdt) ** 2)
        v = v + rng.uniform(-amp, amp) * b
        h = h + rng.uniform(-amp, amp) * b
    return v, h


class TestWeight:
    def test_range(self, profile):
        wp = WeightParams(profile=profile, lam=LAM)
        xi = np.linspace(-400, 400, 4001)
        w = weight(wp, xi)
        assert w.max() <= 1.0 + 1e-12
        assert w.min() >= 1.0 - LAM - 1e-12
        # monotone decreasing across the layer
        assert np.all(np.diff(w) <= 1e-15)

    def test_derivative_matches_fd(self, profile):
        wp = WeightParams(profile=profile, lam=LAM)
        xi = np.linspace(-15, 15, 2001)
        d = xi[1] - xi[0]
        w = weight(wp, xi)
        dw = weight_derivative(wp, xi)
        fd = (w[2:] - w[:-2]) / (2 * d)
        np.testing.assert_allclose(dw[1:-1], fd, atol=5e-6)
        assert dw[1000] < 0.0

    def test_lam_validation(self, profile):
        with pytest.raises(ValueError):
            WeightParams(profile=profile, lam=0.0)
        with pytest.raises(ValueError):
            WeightParams(profile=profile, lam=1.0)


class TestErrorTerms:
    def test_F_matches_finite_differences(self, frame):
        """Closed-form F1, F2 against numerical derivatives of their defining
        bracket expressions."""
        cf = frame.cf
        gas = frame.gas
        dy = frame.dy
        b1 = lambda s: s ** gas.beta * (-gas.gamma) * s ** (-gas.gamma - 1.0)
        brack1 = b1(cf.vt) * cf.dvt - b1(cf.vs) * cf.dvs
        fd1 = (brack1[2:] - brack1[:-2]) / (2 * dy)
        assert np.max(np.abs(fd1 - frame.F1[1:-1])) <= 1e-5
        brack2 = cf.vt ** -gas.gamma - cf.vr ** -gas.gamma - cf.vs ** -gas.gamma
        fd2 = (brack2[2:] - brack2[:-2]) / (2 * dy)
        assert np.max(np.abs(fd2 - frame.F2[1:-1])) <= 1e-5

    def test_F_vanishes_without_rarefaction(self):
        cw0 = build_wave({"gamma": 1.4, "alpha": 1.0},
                         {"v_minus": 1.0, "v_mid": 0.8, "v_plus": 0.8,
                          "u_minus": 0.0}, NU, np.sqrt(NU))
        grid0 = auto_domain(cw0, 1.0, 0.1)
        cf = cw0.eval(0.5, grid0.ys, 0.0)
        F1, F2 = compute_F(cw0.gas, cf)
        assert np.max(np.abs(F1)) <= 1e-13
        assert np.max(np.abs(F2)) <= 1e-13

    def test_F_decays_in_far_field(self, frame):
        edge = max(abs(frame.F1[0]), abs(frame.F1[-1]),
                   abs(frame.F2[0]), abs(frame.F2[-1]))
        center = max(np.max(np.abs(frame.F1)), np.max(np.abs(frame.F2)))
        assert edge <= 1e-8 * center


class TestFunctionals:
    def test_zero_at_reference(self, frame):
        r = evaluate_functionals(frame, frame.cf.vt, frame.cf.ht, delta=0.25)
        assert r.weighted_eta == 0.0
        assert r.Y == 0.0
        assert r.eta_unweighted == 0.0
        assert r.D == 0.0

    def test_decomposition_identity_random_states(self, frame):
        rng = np.random.default_rng(3)
        for k in range(10):
            v, h = perturbed_state(frame, rng)
            for delta in (0.05, 0.1, 0.25):
                r = evaluate_functionals(frame, v, h, delta=delta)
                scale = 1.0 + abs(r.J_bad) + abs(r.J_good)
                assert abs(identity_residual(r)) <= 1e-10 * scale

    def test_nonnegativity_random_states(self, frame):
        rng = np.random.default_rng(4)
        for k in range(10):
            v, h = perturbed_state(frame, rng, amp=0.05)
            r = evaluate_functionals(frame, v, h, delta=0.25)
            assert nonnegativity_violations(r, LAM) == {}

    def test_weighted_eta_positive_off_reference(self, frame):
        rng = np.random.default_rng(5)
        v, h = perturbed_state(frame, rng)
        r = evaluate_functionals(frame, v, h, delta=0.25)
        assert r.weighted_eta > 0.0
        assert r.eta_unweighted >= r.weighted_eta  # w <= 1

    def test_Y_linear_part_dominates(self, frame):
        """Y along a perturbation ray is s*A + s^2*B; the slope estimated at
        s = 1e-4 predicts the s = 1e-3 value to first order."""
        ys = frame.ys
        phi = np.exp(-0.5 * ((ys + 3.0) / 2.0) ** 2)
        psi = np.exp(-0.5 * ((ys - 4.0) / 1.5) ** 2)
        vals = {}
        for s in (1e-3, 1e-4):
            r = evaluate_functionals(frame, frame.cf.vt + s * phi,
                                     frame.cf.ht + s * psi, delta=0.25)
            vals[s] = r.Y
        slope = vals[1e-4] / 1e-4
        assert slope != 0.0
        assert abs(vals[1e-3] / 1e-3 - slope) <= 2e-2 * abs(slope)

    def test_report_scalars_finite(self, frame):
        rng = np.random.default_rng(6)
        v, h = perturbed_state(frame, rng)
        r = evaluate_functionals(frame, v, h, delta=0.1, tau=0.5, E0=1e-3)
        for name in ("weighted_eta", "Y", "J_bad", "J_good", "B_delta",
                     "G_delta", "rar_relp_integral", "shock_relQ_integral",
                     "fisher_integral"):
            assert np.isfinite(getattr(r, name))
        assert r.tau == 0.5 and r.E0 == 1e-3 and r.delta == 0.1


class TestTruncation:
    def test_vbar_reference_value(self, gas):
        got = float(truncate_vbar(gas, 0.5, 1.0, 0.3))
        assert got == pytest.approx(1.3 ** (-1.0 / 1.4), rel=1e-12)
        assert got == pytest.approx(0.8291086, abs=1e-6)

    def test_vbar_identity_inside_band(self, gas):
        v = np.array([0.95, 1.0, 1.05])
        out = truncate_vbar(gas, v, 1.0, 0.5)
        np.testing.assert_allclose(out, v, rtol=1e-14)

    @given(v=st.floats(min_value=0.1, max_value=5.0),
           vt=st.floats(min_value=0.5, max_value=2.0),
           d1=st.floats(min_value=0.01, max_value=1.0))
    def test_vbar_idempotent_and_clamped(self, v, vt, d1):
        gas = GasParams(gamma=1.4)
        once = float(truncate_vbar(gas, v, vt, d1))
        twice = float(truncate_vbar(gas, once, vt, d1))
        assert twice == pytest.approx(once, rel=1e-14)
        gap = once ** -1.4 - vt ** -1.4
        assert -d1 - 1e-12 <= gap <= d1 + 1e-12

    def test_vbar_validation(self, gas):
        with pytest.raises(ValueError):
            truncate_vbar(gas, 1.0, 1.0, 0.0)

    @given(v=st.floats(min_value=0.05, max_value=5.0),
           vt=st.floats(min_value=0.5, max_value=2.0))
    def test_vk_idempotent(self, v, vt):
        gas = GasParams(gamma=1.4)
        once = float(truncate_vk(gas, v, vt, 1.0))
        twice = float(truncate_vk(gas, once, vt, 1.0))
        assert twice == pytest.approx(once, rel=1e-14)

    def test_vk_band(self, gas):
        # k1 = p(v_minus)/2 = 0.5, k2 = 2 p(v_minus) + 1 = 3 for v_minus = 1
        out = float(truncate_vk(gas, 10.0, 1.0, 1.0))   # huge volume: p -> 0
        assert out ** -1.4 - 1.0 == pytest.approx(-0.5, abs=1e-12)
        out = float(truncate_vk(gas, 0.1, 1.0, 1.0))    # tiny volume: p huge
        assert out ** -1.4 - 1.0 == pytest.approx(3.0, abs=1e-12)


class TestInteraction:
    def test_products_vanish_without_rarefaction(self, gas):
        from compwave.rarefaction import RarefactionParams
        from compwave.riemann import RiemannSetup
        from compwave.shock_profile import build_profile
        setup0 = RiemannSetup(gas, 1.0, 0.8, 0.8)
        prof0 = build_profile(gas, setup0)
        rp0 = RarefactionParams(gas, 0.8, 0.8, setup0.u_mid, a=np.sqrt(NU))
        ys = np.linspace(-80, 40, 2401)
        d = interaction_diagnostics(prof0, rp0, NU, 5.0, 0.0, ys)
        assert d["sup_P1"] == 0.0
        assert d["sup_P2"] == 0.0
        assert d["sup_P3"] == 0.0

    def test_products_decay_in_time(self, profile, rparams):
        ys = np.linspace(-150, 60, 4201)
        sups = []
        for tau in (2.0, 6.0):
            d = interaction_diagnostics(profile, rparams, NU, tau, 0.0, ys)
            sups.append((d["sup_P1"], d["sup_P2"], d["sup_P3"]))
        for k in range(3):
            assert sups[1][k] < sups[0][k]

    def test_envelope_constants_finite(self, profile, rparams):
        ys = np.linspace(-150, 60, 4201)
        d = interaction_diagnostics(profile, rparams, NU, 5.0, -0.1, ys)
        for key in ("C1_left", "C1_right", "C2_left", "C2_right",
                    "C3_left", "C3_right"):
            assert np.isfinite(d[key]) and d[key] >= 0.0
        assert d["shift_bound_ok"]
