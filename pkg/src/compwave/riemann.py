"""Exact wave curves and the composite backward-shock / forward-rarefaction solution.

The Riemann data of interest connect a left state to a right state through a
1-shock down to an intermediate volume ``v_mid`` followed by a 2-rarefaction
up to ``v_plus``, with ``0 < v_plus < v_mid < v_minus``.  The shock branch is
the Rankine-Hugoniot curve

    -sigma*(v - v_minus) = u - u_minus,
    -sigma*(u - u_minus) = p(v_minus) - p(v),

with the entropic (backward) speed ``sigma1 < 0``, and the rarefaction branch
is the forward characteristic integral curve

    u = u_from - integral_{v_from}^{v} lambda2(s) ds,

whose antiderivative is closed-form for the gamma law.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .gas import GasParams, State, lambda2, pressure

__all__ = [
    "RiemannSetup",
    "shock_speed",
    "hugoniot_state",
    "rc2_velocity",
    "solve_intermediate",
    "riemann_sample",
]

#: wave-strength ordering guard: warn when eps2 > threshold * eps1
STRENGTH_RATIO_WARN = 3.0


def shock_speed(gas: GasParams, v_minus: float, v_mid: float) -> float:
    """Speed of the backward shock joining ``v_minus`` to ``v_mid <= v_minus``.

    ``sigma1 = -sqrt((p(v_mid) - p(v_minus)) / (v_minus - v_mid)) < 0``;
    the degenerate limit ``v_mid == v_minus`` returns the characteristic
    speed ``-lambda2(v_minus)``.
    """
    if not 0.0 < v_mid <= v_minus:
        raise ValueError(f"need 0 < v_mid <= v_minus, got v_mid={v_mid}, v_minus={v_minus}")
    if v_mid == v_minus:
        return float(-lambda2(gas, v_minus))
    num = pressure(gas, v_mid) - pressure(gas, v_minus)
    return float(-np.sqrt(num / (v_minus - v_mid)))


def hugoniot_state(gas: GasParams, U_minus: State, v: float) -> State:
    """State on the 1-shock curve through ``U_minus`` at volume ``v``."""
    sigma = shock_speed(gas, U_minus.v, v)
    return State(v, U_minus.u - sigma * (v - U_minus.v))


def _riemann_coordinate(gas: GasParams, v):
    # antiderivative of lambda2: integral lambda2(s) ds = -coef * s**(-(gamma-1)/2)
    coef = 2.0 * np.sqrt(gas.gamma) / (gas.gamma - 1.0)
    return coef * np.asarray(v) ** (-(gas.gamma - 1.0) / 2.0)


def rc2_velocity(gas: GasParams, U_from: State, v):
    """Velocity on the forward rarefaction curve through ``U_from`` at volume ``v``."""
    return U_from.u + _riemann_coordinate(gas, v) - _riemann_coordinate(gas, U_from.v)


def solve_intermediate(gas: GasParams, U_minus: State, U_plus: State,
                       tol: float = 1e-12) -> tuple[float, float]:
    """Recover the intermediate volume of the shock + rarefaction composite.

    Solves ``g(v) = 0`` where ``g`` is the mismatch at ``U_plus.v`` between the
    prescribed right velocity and the one reached by a 1-shock to ``v`` followed
    by a 2-rarefaction to ``U_plus.v``.  ``g`` is strictly increasing on
    ``[v_plus, v_minus]``; the root is found by bisection on that bracket and
    polished with Newton steps until the velocity residual drops below ``tol``.

    Returns
    -------
    (v_mid, residual)
    """
    v_lo, v_hi = U_plus.v, U_minus.v
    if not 0.0 < v_lo < v_hi:
        raise ConfigError(f"need 0 < v_plus < v_minus, got v_plus={v_lo}, v_minus={v_hi}")

    def g(v):
        mid = hugoniot_state(gas, U_minus, v)
        return rc2_velocity(gas, mid, U_plus.v) - U_plus.u

    g_lo, g_hi = g(v_lo), g(v_hi)
    if g_lo > 0.0 or g_hi < 0.0:
        raise ConfigError(
            "u_plus is not reachable by a 1-shock followed by a 2-rarefaction: "
            f"bracket residuals g({v_lo})={g_lo:.6g}, g({v_hi})={g_hi:.6g}"
        )

    a, b = v_lo, v_hi
    # bisect keeping the invariant g(a) <= 0 <= g(b) (degenerate waves put
    # the root exactly at a bracket end, so ties go to the low side)
    for _ in range(200):
        m = 0.5 * (a + b)
        if not a < m < b:
            break
        gm = g(m)
        if gm == 0.0:
            a = b = m
            break
        if gm < 0.0:
            a = m
        else:
            b = m
    v_mid = 0.5 * (a + b)

    # Newton polish with a finite-difference slope; probes stay inside the
    # bracket (g is undefined past it)
    for _ in range(4):
        r = g(v_mid)
        if abs(r) <= tol:
            break
        h = 1e-7 * max(v_mid, 1.0)
        hp = min(h, v_hi - v_mid)
        hm = min(h, v_mid - v_lo)
        if hp + hm <= 0.0:
            break
        slope = (g(v_mid + hp) - g(v_mid - hm)) / (hp + hm)
        if slope <= 0.0:
            break
        step = r / slope
        cand = min(max(v_mid - step, v_lo), v_hi)
        if cand == v_mid:
            break
        v_mid = cand

    return float(v_mid), float(g(v_mid))


@dataclass(frozen=True)
class RiemannSetup:
    """Composite Riemann problem: 1-shock to ``v_mid`` then 2-rarefaction to ``v_plus``.

    Derived quantities (shock speed, intermediate and right velocities, wave
    strengths) are computed on construction.  The strengths are pressure jumps:
    ``eps1 = |p(v_minus) - p(v_mid)|`` and ``eps2 = |p(v_mid) - p(v_plus)|``.
    """

    gas: GasParams
    v_minus: float
    v_mid: float
    v_plus: float
    u_minus: float = 0.0
    u_mid: float = field(init=False)
    u_plus: float = field(init=False)
    sigma1: float = field(init=False)
    eps1: float = field(init=False)
    eps2: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.v_plus <= self.v_mid < self.v_minus:
            raise ConfigError(
                "need 0 < v_plus <= v_mid < v_minus, got "
                f"({self.v_minus}, {self.v_mid}, {self.v_plus})"
            )
        gas = self.gas
        sigma = shock_speed(gas, self.v_minus, self.v_mid)
        u_mid = self.u_minus - sigma * (self.v_mid - self.v_minus)
        u_plus = float(rc2_velocity(gas, State(self.v_mid, u_mid), self.v_plus))
        p_minus = float(pressure(gas, self.v_minus))
        p_mid = float(pressure(gas, self.v_mid))
        p_plus = float(pressure(gas, self.v_plus))
        object.__setattr__(self, "sigma1", sigma)
        object.__setattr__(self, "u_mid", float(u_mid))
        object.__setattr__(self, "u_plus", u_plus)
        object.__setattr__(self, "eps1", abs(p_minus - p_mid))
        object.__setattr__(self, "eps2", abs(p_mid - p_plus))
        if self.eps1 > 0.0 and self.eps2 > STRENGTH_RATIO_WARN * self.eps1:
            warnings.warn(
                f"rarefaction strength eps2={self.eps2:.4g} exceeds "
                f"{STRENGTH_RATIO_WARN} * eps1={self.eps1:.4g}; estimates assume "
                "the shock is not dominated by the rarefaction",
                stacklevel=2,
            )

    @property
    def U_minus(self) -> State:
        return State(self.v_minus, self.u_minus)

    @property
    def U_mid(self) -> State:
        return State(self.v_mid, self.u_mid)

    @property
    def U_plus(self) -> State:
        return State(self.v_plus, self.u_plus)

    @property
    def eps(self) -> float:
        """Product of the wave strengths."""
        return self.eps1 * self.eps2

    @classmethod
    def from_states(cls, gas: GasParams, U_minus: State, U_plus: State) -> "RiemannSetup":
        v_mid, _ = solve_intermediate(gas, U_minus, U_plus)
        return cls(gas, U_minus.v, v_mid, U_plus.v, U_minus.u)


def riemann_sample(setup: RiemannSetup, t: float, x):
    """Sample the exact composite solution at time ``t`` and positions ``x``.

    Returns ``(v, u)`` arrays.  At ``t == 0`` the initial two-state data are
    returned with ``x = 0`` taking the right state.  Inside the rarefaction fan
    the volume solves ``lambda2(v) = x/t`` in closed form and the velocity
    follows the forward characteristic curve from the intermediate state.
    """
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    gas = setup.gas
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    v = np.empty_like(x)
    u = np.empty_like(x)

    if t == 0.0:
        left = x < 0.0
        v[left], u[left] = setup.v_minus, setup.u_minus
        v[~left], u[~left] = setup.v_plus, setup.u_plus
    else:
        s = x / t
        lam_mid = float(lambda2(gas, setup.v_mid))
        lam_plus = float(lambda2(gas, setup.v_plus))
        reg_minus = s < setup.sigma1
        reg_mid = (~reg_minus) & (s < lam_mid)
        reg_plus = s > lam_plus
        reg_fan = ~(reg_minus | reg_mid | reg_plus)
        v[reg_minus], u[reg_minus] = setup.v_minus, setup.u_minus
        v[reg_mid], u[reg_mid] = setup.v_mid, setup.u_mid
        v[reg_plus], u[reg_plus] = setup.v_plus, setup.u_plus
        if np.any(reg_fan):
            vf = (s[reg_fan] / np.sqrt(gas.gamma)) ** (-2.0 / (gas.gamma + 1.0))
            v[reg_fan] = vf
            u[reg_fan] = rc2_velocity(gas, setup.U_mid, vf)

    if scalar:
        return float(v[0]), float(u[0])
    return v, u
