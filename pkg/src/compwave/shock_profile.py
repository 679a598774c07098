"""Traveling viscous shock profile of the transformed system.

The profile ``(v, u)(xi)``, ``xi = y - sigma1 * tau``, joins ``v_minus`` at
``xi -> -inf`` to ``v_mid`` at ``xi -> +inf`` and solves the first-order
reduction of the traveling-wave system,

    dv/dxi = -(sigma1**2 * (v - v_minus) + p(v) - p(v_minus))
             / (sigma1 * gamma * v**(-alpha - 1)),

obtained by integrating the traveling-wave equations once from the left state.
The velocity and the gradient-corrected velocity follow in closed form:

    u(xi) = u_minus - sigma1 * (v(xi) - v_minus),
    h(xi) = u_minus + (p(v(xi)) - p(v_minus)) / sigma1,

the latter being identical to ``u - gamma * v**(-alpha-1) * dv/dxi`` along the
profile, so the stored table satisfies that relation to machine precision.

The table is built by fixed-step classical Runge-Kutta from the midpoint
anchor ``v(0) = (v_minus + v_mid) / 2`` in both directions, stops once the
endpoint is approached to 1e-13, and pads with the exact constant states.
Evaluation between nodes uses a local cubic Hermite interpolant whose nodal
derivatives are the exact ODE right-hand side; beyond the table the end
states continue with zero derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .gas import GasParams, pressure, pressure_derivative
from .riemann import RiemannSetup

__all__ = [
    "ShockProfile",
    "ProfileFields",
    "profile_rhs",
    "build_profile",
    "eval_shifted",
    "derivative_bounds_check",
]


def profile_rhs(gas: GasParams, setup: RiemannSetup, v):
    """Right-hand side ``dv/dxi`` of the profile equation at volume ``v``."""
    v = np.asarray(v, dtype=float)
    sigma = setup.sigma1
    num = sigma * sigma * (v - setup.v_minus) + pressure(gas, v) - pressure(gas, setup.v_minus)
    den = sigma * gas.b_coef * v ** (-gas.alpha - 1.0)
    return -num / den


def _profile_rhs_dv(gas: GasParams, setup: RiemannSetup, v):
    """Derivative of ``profile_rhs`` with respect to ``v`` (chain-rule helper)."""
    v = np.asarray(v, dtype=float)
    sigma = setup.sigma1
    b = gas.b_coef
    num = sigma * sigma * (v - setup.v_minus) + pressure(gas, v) - pressure(gas, setup.v_minus)
    dnum = sigma * sigma + pressure_derivative(gas, v)
    den = sigma * b * v ** (-gas.alpha - 1.0)
    dden = sigma * b * (-gas.alpha - 1.0) * v ** (-gas.alpha - 2.0)
    return -(dnum * den - num * dden) / (den * den)


def _integrate_branch(gas, setup, v0, dxi, stop_value, stop_tol, max_steps):
    """Fixed-step RK4 for the scalar profile ODE; returns the list of values
    after the anchor (one entry per step, anchor excluded)."""
    gamma = gas.gamma
    alpha = gas.alpha
    b = gas.b_coef
    sigma = setup.sigma1
    v_minus = setup.v_minus
    p_minus = v_minus ** (-gamma)

    def f(v):
        num = sigma * sigma * (v - v_minus) + v ** (-gamma) - p_minus
        return -num / (sigma * b * v ** (-alpha - 1.0))

    vals = []
    v = v0
    for _ in range(max_steps):
        k1 = f(v)
        k2 = f(v + 0.5 * dxi * k1)
        k3 = f(v + 0.5 * dxi * k2)
        k4 = f(v + dxi * k3)
        v = v + (dxi / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        vals.append(v)
        if abs(v - stop_value) < stop_tol:
            break
    return vals


def _tail_fit(xi, dev, lo, hi):
    """Slope, intercept and R^2 of log|dev| against xi on lo <= |dev| <= hi."""
    mask = (dev >= lo) & (dev <= hi)
    if np.count_nonzero(mask) < 8:
        return np.nan, np.nan, 0.0
    xs = xi[mask]
    ys = np.log(dev[mask])
    slope, intercept = np.polyfit(xs, ys, 1)
    fit = slope * xs + intercept
    ss_res = float(np.sum((ys - fit) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return float(slope), float(intercept), r2


@dataclass
class ShockProfile:
    """Tabulated traveling-wave profile with interpolation and diagnostics."""

    gas: GasParams
    setup: RiemannSetup
    dxi: float
    xi: np.ndarray
    v_tab: np.ndarray
    u_tab: np.ndarray
    h_tab: np.ndarray
    dv_tab: np.ndarray
    half_width: float
    c1: float          # fitted tail rate / eps1 (right tail)
    C1: float          # max |dv/dxi| / eps1**2
    decay_r2: float    # R^2 of the right-tail log-linear fit
    rate_left: float   # fitted decay rate of the left tail (toward v_minus)
    _spline: CubicHermiteSpline

    @property
    def sigma1(self) -> float:
        return self.setup.sigma1

    @property
    def eps1(self) -> float:
        return self.setup.eps1


@dataclass
class ProfileFields:
    """Shifted profile values and y-derivatives on a set of points."""

    vs: np.ndarray   # volume
    us: np.ndarray   # fluid velocity
    hs: np.ndarray   # gradient-corrected velocity
    dvs: np.ndarray  # d(vs)/dy
    ddvs: np.ndarray
    dus: np.ndarray
    dhs: np.ndarray


def build_profile(gas: GasParams, setup: RiemannSetup, dxi: float = 0.01,
                  max_half_width: float = 400.0, stop_tol: float = 1e-13) -> ShockProfile:
    """Integrate and tabulate the profile on a uniform grid.

    The half-width defaults to ``60 / (fitted tail rate)``, clipped to
    ``max_half_width``; past the stopping point the table holds the exact
    end states.
    """
    if not dxi > 0.0:
        raise ValueError(f"dxi must be positive, got {dxi}")
    v_anchor = 0.5 * (setup.v_minus + setup.v_mid)
    max_steps = int(np.ceil(max_half_width / dxi))

    right = _integrate_branch(gas, setup, v_anchor, dxi, setup.v_mid, stop_tol, max_steps)
    left = _integrate_branch(gas, setup, v_anchor, -dxi, setup.v_minus, stop_tol, max_steps)

    # provisional arrays for the tail fit (right branch only)
    xi_right = dxi * np.arange(1, len(right) + 1)
    dev_right = np.asarray(right) - setup.v_mid
    jump = setup.v_minus - setup.v_mid
    slope, _, r2 = _tail_fit(xi_right, dev_right, 1e-10, 0.01 * jump)
    rate = -slope if np.isfinite(slope) and slope < 0.0 else np.nan
    if np.isfinite(rate) and rate > 0.0:
        half_width = min(60.0 / rate, max_half_width)
    else:
        half_width = max_half_width

    dev_left = setup.v_minus - np.asarray(left)
    slope_l, _, _ = _tail_fit(dxi * np.arange(1, len(left) + 1), dev_left, 1e-10, 0.01 * jump)
    rate_left = -slope_l if np.isfinite(slope_l) and slope_l < 0.0 else np.nan

    n_half = int(np.ceil(half_width / dxi))
    xi = dxi * np.arange(-n_half, n_half + 1)
    v_tab = np.empty_like(xi)
    v_tab[n_half] = v_anchor
    nr = min(len(right), n_half)
    v_tab[n_half + 1:n_half + 1 + nr] = right[:nr]
    v_tab[n_half + 1 + nr:] = setup.v_mid
    nl = min(len(left), n_half)
    v_tab[n_half - nl:n_half] = left[:nl][::-1]
    v_tab[:n_half - nl] = setup.v_minus

    p_minus = float(pressure(gas, setup.v_minus))
    sigma = setup.sigma1
    u_tab = setup.u_minus - sigma * (v_tab - setup.v_minus)
    h_tab = setup.u_minus + (pressure(gas, v_tab) - p_minus) / sigma
    dv_tab = np.asarray(profile_rhs(gas, setup, v_tab))

    spline = CubicHermiteSpline(xi, v_tab, dv_tab)

    eps1 = setup.eps1
    C1 = float(np.max(np.abs(dv_tab)) / eps1**2)
    c1 = rate / eps1 if np.isfinite(rate) else np.nan

    return ShockProfile(gas=gas, setup=setup, dxi=dxi, xi=xi, v_tab=v_tab,
                        u_tab=u_tab, h_tab=h_tab, dv_tab=dv_tab,
                        half_width=float(xi[-1]), c1=c1, C1=C1, decay_r2=r2,
                        rate_left=float(rate_left), _spline=spline)


def eval_shifted(profile: ShockProfile, y, shift: float) -> ProfileFields:
    """Evaluate the shifted profile ``xi = y - shift`` with y-derivatives.

    Outside the tabulated range the end states continue constantly; the
    derivatives there vanish because the ODE right-hand side vanishes at the
    end states.
    """
    gas = profile.gas
    setup = profile.setup
    xi = np.asarray(y, dtype=float) - shift
    xi_c = np.clip(xi, profile.xi[0], profile.xi[-1])
    vs = profile._spline(xi_c)
    # interpolation can overshoot the monotone range by roundoff near the
    # constant padding; clamp so pressures stay well-defined
    np.clip(vs, setup.v_mid, setup.v_minus, out=vs)
    dvs = np.asarray(profile_rhs(gas, setup, vs))
    ddvs = np.asarray(_profile_rhs_dv(gas, setup, vs)) * dvs
    sigma = setup.sigma1
    p_minus = setup.v_minus ** (-gas.gamma)
    ps = pressure(gas, vs)
    us = setup.u_minus - sigma * (vs - setup.v_minus)
    hs = setup.u_minus + (ps - p_minus) / sigma
    dus = -sigma * dvs
    dhs = pressure_derivative(gas, vs) * dvs / sigma
    return ProfileFields(vs=vs, us=us, hs=hs, dvs=dvs, ddvs=ddvs, dus=dus, dhs=dhs)


def derivative_bounds_check(profile: ShockProfile) -> dict:
    """Fitted constants of the profile decay and slope bounds.

    Returns the fitted ``C1`` (max slope over ``eps1**2``), the tail rate
    expressed as ``c1 = rate / eps1``, the R^2 of the log-linear tail fit and
    the scaled infimum of ``|dv/dxi|`` over the window ``|xi| <= 1/eps1``.
    """
    eps1 = profile.eps1
    window = np.abs(profile.xi) <= 1.0 / eps1
    inf_slope = float(np.min(np.abs(profile.dv_tab[window]))) if np.any(window) else 0.0
    return {
        "C1": profile.C1,
        "c1": profile.c1,
        "decay_r2": profile.decay_r2,
        "rate_left": profile.rate_left,
        "inf_window_ratio": inf_slope / eps1**2,
        "anchor_error": abs(float(profile.v_tab[len(profile.xi) // 2])
                            - 0.5 * (profile.setup.v_minus + profile.setup.v_mid)),
        "left_endpoint_error": abs(float(profile.v_tab[0]) - profile.setup.v_minus),
        "right_endpoint_error": abs(float(profile.v_tab[-1]) - profile.setup.v_mid),
    }
