"""Weighted relative-entropy functionals of the composite wave.

Everything here evaluates, on the solver grid, the machinery driving the
shift dynamics and the dissipation bookkeeping:

* the decreasing weight ``w = 1 - (lam/eps1) * (p(shock profile) - p(v_minus))``,
  taking values in ``[1 - lam, 1]``;
* the error terms ``F1``, ``F2`` of the superposed wave (they vanish when
  either wave is switched off);
* the shift functional ``Y`` and the signed productions ``J_bad``, ``J_good``
  entering the exact balance  d/dtau int w * eta(U|Utilde) dy
  = Xdot * Y + J_bad - J_good;
* the delta-indicator decomposition of ``J_bad - J_good`` into the bad part
  ``B_delta`` and the coercive part ``G_delta``, which holds as an algebraic
  identity node by node and is therefore reproduced to floating-point
  accuracy when both sides share one quadrature pass (they do here);
* pressure-space truncations and the wave-interaction diagnostics.

All integrals are trapezoid sums on the uniform solver grid.  Derivatives of
the perturbation pressure ``p(v) - p(vtilde)`` use centered differences,
matching the solver's viscous-flux stencil.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gas import GasParams
from .rarefaction import RarefactionParams, smooth_rarefaction_derivatives
from .shock_profile import ShockProfile, eval_shifted

__all__ = [
    "WeightParams",
    "FunctionalFrame",
    "FunctionalReport",
    "weight",
    "weight_derivative",
    "compute_F",
    "compute_Y",
    "compute_Jbad_Jgood",
    "compute_B_G",
    "evaluate_functionals",
    "identity_residual",
    "nonnegativity_violations",
    "truncate_vbar",
    "truncate_vk",
    "interaction_diagnostics",
]


@dataclass(frozen=True)
class WeightParams:
    """Weight amplitude and the profile it rides on."""

    profile: ShockProfile
    lam: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"weight amplitude must lie in (0, 1), got {self.lam}")


def weight(wp: WeightParams, xi):
    """Weight as a function of the profile coordinate ``xi``."""
    prof = wp.profile
    f = eval_shifted(prof, np.asarray(xi, dtype=float), 0.0)
    gas = prof.gas
    p_minus = prof.setup.v_minus ** (-gas.gamma)
    ps = f.vs ** (-gas.gamma)
    return 1.0 - (wp.lam / prof.eps1) * (ps - p_minus)


def weight_derivative(wp: WeightParams, xi):
    """``dw/dxi``; strictly negative across the transition layer."""
    prof = wp.profile
    f = eval_shifted(prof, np.asarray(xi, dtype=float), 0.0)
    gas = prof.gas
    dps = -gas.gamma * f.vs ** (-gas.gamma - 1.0) * f.dvs
    return -(wp.lam / prof.eps1) * dps


def compute_F(gas: GasParams, cf) -> tuple[np.ndarray, np.ndarray]:
    """Error terms of the superposed wave.

    ``F1 = d/dy [ vt^beta d/dy p(vt) - vs^beta d/dy p(vs) ]`` expanded by the
    chain rule through the closed-form derivatives, and
    ``F2 = d/dy [ p(vt) - p(vr) - p(vs) ]``. ``cf`` is any object carrying the
    composite fields (``vt, dvt, ddvt, vs, dvs, ddvs, vr, dvr``).
    """
    g, al = gas.gamma, gas.alpha
    # s^beta * p'(s) = -g * s^(-al-1);  d/ds of that = g*(al+1)*s^(-al-2)
    b1_t = -g * cf.vt ** (-al - 1.0)
    b1p_t = g * (al + 1.0) * cf.vt ** (-al - 2.0)
    b1_s = -g * cf.vs ** (-al - 1.0)
    b1p_s = g * (al + 1.0) * cf.vs ** (-al - 2.0)
    F1 = (b1p_t * cf.dvt * cf.dvt + b1_t * cf.ddvt
          - b1p_s * cf.dvs * cf.dvs - b1_s * cf.ddvs)
    pp_t = -g * cf.vt ** (-g - 1.0)
    pp_s = -g * cf.vs ** (-g - 1.0)
    pp_r = -g * cf.vr ** (-g - 1.0)
    F2 = pp_t * cf.dvt - pp_r * cf.dvr - pp_s * cf.dvs
    return F1, F2


class FunctionalFrame:
    """Composite-wave and weight arrays frozen at one ``(tau, X)``.

    Precomputes everything that does not depend on the evolving state so the
    per-step functional evaluation touches the state arrays only.
    """

    def __init__(self, gas: GasParams, ys: np.ndarray, dy: float, cf,
                 wp: WeightParams, sigma1: float, eps1: float, eps2: float):
        self.gas = gas
        self.ys = ys
        self.dy = dy
        self.cf = cf
        self.sigma1 = sigma1
        self.eps1 = eps1
        self.eps2 = eps2
        self.eps = eps1 * eps2
        g = gas.gamma
        self.pt = cf.vt ** (-g)
        self.pprime_t = -g * self.pt / cf.vt
        self.dpt = self.pprime_t * cf.dvt
        self.vtbeta = cf.vt ** gas.beta
        p_minus = wp.profile.setup.v_minus ** (-g)
        ps = cf.vs ** (-g)
        self.w = 1.0 - (wp.lam / eps1) * (ps - p_minus)
        self.dw = -(wp.lam / eps1) * (-g * ps / cf.vs) * cf.dvs
        self.F1, self.F2 = compute_F(gas, cf)

    def _ddy(self, arr: np.ndarray) -> np.ndarray:
        out = np.empty_like(arr)
        out[1:-1] = (arr[2:] - arr[:-2]) / (2.0 * self.dy)
        out[0] = (arr[1] - arr[0]) / self.dy
        out[-1] = (arr[-1] - arr[-2]) / self.dy
        return out

    def _int(self, integrand: np.ndarray) -> float:
        return float(np.trapezoid(integrand, dx=self.dy))


@dataclass
class FunctionalReport:
    """All functionals of one state against one frozen composite frame."""

    tau: float
    delta: float
    eps: float
    weighted_eta: float
    Y: float
    J_bad: float
    J_good: float
    B1: float
    B2_minus: float
    B2_plus: float
    B3: float
    B4: float
    B5: float
    G1_plus: float
    G1_minus: float
    G2: float
    G_r: float
    G_h: float
    D: float
    G3: float
    eta_unweighted: float
    rar_relp_integral: float     # int |d/dy u_rar| * p(v|vtilde) dy
    shock_relQ_integral: float   # int |d/dy v_shock| * Q(v|vtilde) dy
    fisher_integral: float       # int v^beta |d/dy (p(v)-p(vtilde))|^2 dy
    w_min: float
    w_max: float
    E0: float = 0.0

    @property
    def B_delta(self) -> float:
        return (self.B1 + self.B2_minus + self.B2_plus / (1.0 - self.eps)
                + self.B3 + self.B4 + self.B5)

    @property
    def G_delta(self) -> float:
        return ((1.0 - self.eps) * (self.G1_plus + self.G1_minus) + self.G2
                + self.G_r + self.eps * self.G_h + self.D + self.G3)


def evaluate_functionals(frame: FunctionalFrame, v: np.ndarray, h: np.ndarray,
                         delta: float, tau: float = 0.0, E0: float = 0.0) -> FunctionalReport:
    """Evaluate every functional of ``(v, h)`` against the frame in one pass."""
    gas = frame.gas
    g = gas.gamma
    cf = frame.cf
    w, dw = frame.w, frame.dw
    sigma = frame.sigma1
    eps = frame.eps

    pv = v ** (-g)
    vbeta = v ** gas.beta
    q = pv - frame.pt
    z = h - cf.ht
    dq = frame._ddy(q)
    # relative quantities against the composite; Q(s) = s*p(s)/(gamma-1)
    relQ = (v * pv - cf.vt * frame.pt) / (g - 1.0) + frame.pt * (v - cf.vt)
    relp = q - frame.pprime_t * (v - cf.vt)
    eta = 0.5 * z * z + relQ

    W = frame._int(w * eta)
    Y = (-frame._int(dw * eta)
         - frame._int(w * frame.pprime_t * cf.dvs * (v - cf.vt))
         + frame._int(w * cf.dhs * z))

    # shared building blocks of J_bad / J_good and the decomposition
    T = frame._int(dw * q * z)
    B1 = sigma * frame._int(w * cf.dvs * relp)
    B3 = -frame._int(dw * vbeta * q * dq)
    B4 = -frame._int(w * dq * (vbeta - frame.vtbeta) * frame.dpt)
    B5 = frame._int(w * (q * frame.F1 - z * frame.F2))
    G_h = 0.5 * sigma * frame._int(dw * z * z)
    G2 = sigma * frame._int(dw * relQ)
    G_r = frame._int(w * cf.dur * relp)
    D = frame._int(w * vbeta * dq * dq)
    G3 = frame._int(np.abs(dw * frame.dpt * q * (vbeta - frame.vtbeta)))

    J_bad = T + B1 + B3 + B4 + B5
    J_good = G_h + G2 + G_r + D + G3

    le = q <= delta
    gt = ~le
    B2_minus = frame._int(dw * q * z * gt)
    B2_plus = frame._int(dw * q * q * le) / (2.0 * sigma)
    shifted = z - q / ((1.0 - eps) * sigma)
    G1_plus = 0.5 * sigma * frame._int(dw * shifted * shifted * le)
    G1_minus = 0.5 * sigma * frame._int(dw * z * z * gt)

    return FunctionalReport(
        tau=tau, delta=delta, eps=eps,
        weighted_eta=W, Y=Y, J_bad=J_bad, J_good=J_good,
        B1=B1, B2_minus=B2_minus, B2_plus=B2_plus, B3=B3, B4=B4, B5=B5,
        G1_plus=G1_plus, G1_minus=G1_minus, G2=G2, G_r=G_r, G_h=G_h, D=D, G3=G3,
        eta_unweighted=frame._int(eta),
        rar_relp_integral=frame._int(cf.dur * relp),
        shock_relQ_integral=frame._int(np.abs(cf.dvs) * relQ),
        fisher_integral=frame._int(vbeta * dq * dq),
        w_min=float(np.min(w)), w_max=float(np.max(w)), E0=E0,
    )


def compute_Y(frame: FunctionalFrame, v: np.ndarray, h: np.ndarray) -> float:
    """Shift functional alone (see ``evaluate_functionals`` for the batch form)."""
    r = evaluate_functionals(frame, v, h, delta=np.inf)
    return r.Y


def compute_Jbad_Jgood(frame: FunctionalFrame, v: np.ndarray, h: np.ndarray
                       ) -> tuple[float, float]:
    r = evaluate_functionals(frame, v, h, delta=np.inf)
    return r.J_bad, r.J_good


def compute_B_G(frame: FunctionalFrame, v: np.ndarray, h: np.ndarray,
                delta: float) -> dict:
    """The thirteen decomposition components at truncation level ``delta``."""
    r = evaluate_functionals(frame, v, h, delta=delta)
    return {
        "B1": r.B1, "B2_minus": r.B2_minus, "B2_plus": r.B2_plus,
        "B3": r.B3, "B4": r.B4, "B5": r.B5,
        "G1_plus": r.G1_plus, "G1_minus": r.G1_minus, "G2": r.G2,
        "G_r": r.G_r, "G_h": r.G_h, "D": r.D, "G3": r.G3,
        "B_delta": r.B_delta, "G_delta": r.G_delta,
    }


def identity_residual(report: FunctionalReport) -> float:
    """``(J_bad - J_good) - (B_delta - G_delta)``; zero up to roundoff."""
    return (report.J_bad - report.J_good) - (report.B_delta - report.G_delta)


def nonnegativity_violations(report: FunctionalReport, lam: float,
                             tol_scale: float = 1e-14) -> dict:
    """Sign and range checks; returns the offending entries (empty dict = clean)."""
    scale = 1.0 + abs(report.J_bad) + abs(report.J_good)
    bad = {}
    for name in ("G2", "G_r", "G_h", "D", "G1_plus", "G1_minus", "G3"):
        val = getattr(report, name)
        if val < -tol_scale * scale:
            bad[name] = val
    if report.w_min < 1.0 - lam - 1e-12:
        bad["w_min"] = report.w_min
    if report.w_max > 1.0 + 1e-12:
        bad["w_max"] = report.w_max
    return bad


def truncate_vbar(gas: GasParams, v, vtilde, delta1: float):
    """Clamp the pressure perturbation to ``[-delta1, delta1]`` and map back to volume."""
    if not delta1 > 0.0:
        raise ValueError(f"truncation level must be positive, got {delta1}")
    g = gas.gamma
    pv = np.asarray(v, dtype=float) ** (-g)
    pt = np.asarray(vtilde, dtype=float) ** (-g)
    clamped = np.clip(pv - pt, -delta1, delta1)
    return (pt + clamped) ** (-1.0 / g)


def truncate_vk(gas: GasParams, v, vtilde, v_minus: float):
    """Asymmetric cutoff keeping ``p(v_k) - p(vtilde)`` in ``[-k1, k2]``.

    ``k1 = p(v_minus)/2`` protects against vacuum on one side and
    ``k2 = 2*p(v_minus) + 1`` caps the compression on the other.
    """
    g = gas.gamma
    p_minus = float(v_minus) ** (-g)
    k1 = 0.5 * p_minus
    k2 = 2.0 * p_minus + 1.0
    pv = np.asarray(v, dtype=float) ** (-g)
    pt = np.asarray(vtilde, dtype=float) ** (-g)
    clamped = np.clip(pv - pt, -k1, k2)
    return (pt + clamped) ** (-1.0 / g)


def interaction_diagnostics(profile: ShockProfile, rparams: RarefactionParams,
                            nu: float, tau: float, X: float,
                            ys: np.ndarray) -> dict:
    """Pointwise wave-interaction products and their fitted envelope constants.

    The three products couple the shifted shock profile with the smooth
    rarefaction: ``P1 = |vr - v_mid| |dvs|``, ``P2 = |vs - v_mid| |dvr|``,
    ``P3 = |dvs * dvr|``.  Each is compared against its exponential envelope,
    separately on ``y <= 0`` and ``y >= 0``; the fitted constants are the
    suprema of the measured/envelope ratios (common factors cancelled
    analytically so the ratios stay finite in the far field).
    """
    setup = profile.setup
    sigma = setup.sigma1
    shift = sigma * tau + X
    ps = eval_shifted(profile, ys, shift)
    rf = smooth_rarefaction_derivatives(rparams, nu * tau, nu * ys)
    dvr = nu * rf.v_x
    v_mid = setup.v_mid

    P1 = np.abs(rf.v - v_mid) * np.abs(ps.dvs)
    P2 = np.abs(ps.vs - v_mid) * np.abs(dvr)
    P3 = np.abs(ps.dvs * dvr)

    rate_r = nu / rparams.a
    c1e1 = profile.c1 * profile.eps1
    eps1, eps2 = profile.eps1, setup.eps2
    left = ys <= 0.0
    right = ys >= 0.0
    env_left = np.exp(-rate_r * (np.abs(ys[left]) + rparams.w_mid * tau))
    env_right = np.exp(-c1e1 * (np.abs(ys[right]) + 0.5 * abs(sigma) * tau))

    def _sup(arr):
        return float(np.max(arr)) if arr.size else 0.0

    diag = {
        "tau": tau, "X": X,
        "sup_P1": _sup(P1), "sup_P2": _sup(P2), "sup_P3": _sup(P3),
        "shift_bound_ok": bool(X <= 0.5 * abs(sigma) * tau + 1e-15),
    }
    if eps2 > 0.0:
        diag["C1_left"] = _sup(np.abs(rf.v[left] - v_mid) / (eps2 * env_left))
        diag["C1_right"] = _sup(P1[right] / (eps1**2 * eps2 * env_right))
        diag["C2_left"] = _sup(P2[left] / (rate_r * eps1 * eps2 * env_left))
        diag["C2_right"] = _sup(np.abs(ps.vs[right] - v_mid) / (eps1 * env_right))
        diag["C3_left"] = _sup(np.abs(dvr[left]) / (rate_r * eps2 * env_left))
        diag["C3_right"] = _sup(np.abs(ps.dvs[right]) / (eps1**2 * env_right))
    else:
        for key in ("C1_left", "C1_right", "C2_left", "C2_right", "C3_left", "C3_right"):
            diag[key] = 0.0
    return diag
