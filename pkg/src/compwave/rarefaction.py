"""Smooth approximate 2-rarefaction generated by an auxiliary Burgers flow.

The forward characteristic speed ``w = lambda2(v)`` of the rarefaction
satisfies the inviscid Burgers equation ``w_t + w w_x = 0``.  Smoothing the
fan is therefore done upstream: Burgers is solved exactly (by characteristics)
from the monotone data

    w0(x) = (w_mid + w_plus)/2 + (w_plus - w_mid)/2 * tanh(x / a),

with ``w_mid = lambda2(v_mid) < w_plus = lambda2(v_plus)`` and smoothing width
``a``, and the rarefaction fields are recovered in closed form,

    v(t, x) = (w(t, x) / sqrt(gamma)) ** (-2 / (gamma + 1)),
    u(t, x) = u_mid - integral_{v_mid}^{v} lambda2(s) ds.

The pair ``(v, u)`` is then an exact smooth solution of the inviscid system;
spatial derivatives follow by implicit differentiation of the characteristic
relation ``xi + w0(xi) t = x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gas import GasParams, lambda2
from .riemann import rc2_velocity
from .gas import State

__all__ = [
    "RarefactionParams",
    "BurgersFields",
    "RarefactionFields",
    "burgers_initial",
    "burgers_exact",
    "smooth_rarefaction",
    "smooth_rarefaction_derivatives",
    "fan_state",
    "lp_decay_report",
]


@dataclass(frozen=True)
class RarefactionParams:
    """End states and smoothing width of the approximate rarefaction.

    ``v_plus == v_mid`` is allowed and degenerates to the constant state
    (used to switch the rarefaction off).
    """

    gas: GasParams
    v_mid: float
    v_plus: float
    u_mid: float
    a: float
    w_mid: float = field(init=False)
    w_plus: float = field(init=False)
    u_plus: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.v_plus <= self.v_mid:
            raise ValueError(f"need 0 < v_plus <= v_mid, got ({self.v_mid}, {self.v_plus})")
        if not self.a > 0.0:
            raise ValueError(f"smoothing width must be positive, got {self.a}")
        object.__setattr__(self, "w_mid", float(lambda2(self.gas, self.v_mid)))
        object.__setattr__(self, "w_plus", float(lambda2(self.gas, self.v_plus)))
        object.__setattr__(self, "u_plus", float(rc2_velocity(
            self.gas, State(self.v_mid, self.u_mid), self.v_plus)))

    @property
    def degenerate(self) -> bool:
        return self.v_plus == self.v_mid


@dataclass
class BurgersFields:
    w: np.ndarray
    w_x: np.ndarray
    w_xx: np.ndarray
    xi_star: np.ndarray  # characteristic feet, useful as warm start


@dataclass
class RarefactionFields:
    v: np.ndarray
    u: np.ndarray
    v_x: np.ndarray
    u_x: np.ndarray
    v_xx: np.ndarray
    u_xx: np.ndarray
    burgers: BurgersFields


def burgers_initial(params: RarefactionParams, x):
    """Initial data ``w0`` and slope ``w0'`` of the auxiliary Burgers flow."""
    x = np.asarray(x, dtype=float)
    mid = 0.5 * (params.w_mid + params.w_plus)
    half = 0.5 * (params.w_plus - params.w_mid)
    th = np.tanh(x / params.a)
    return mid + half * th, (half / params.a) * (1.0 - th * th)


def burgers_exact(params: RarefactionParams, t: float, x, xi0=None) -> BurgersFields:
    """Solve Burgers by characteristics: ``w(t, x) = w0(xi)``, ``xi + w0(xi) t = x``.

    The monotone-increasing data make the characteristic map invertible for
    every ``t >= 0``; the root is found by damped Newton (the map has slope
    ``>= 1``) with a bisection fallback for stragglers.  ``xi0`` optionally
    warm-starts the iteration.
    """
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    x = np.asarray(x, dtype=float)
    mid = 0.5 * (params.w_mid + params.w_plus)
    half = 0.5 * (params.w_plus - params.w_mid)
    a = params.a

    if params.degenerate or t == 0.0:
        if params.degenerate:
            w = np.full_like(x, params.w_mid)
            zero = np.zeros_like(x)
            return BurgersFields(w=w, w_x=zero, w_xx=zero, xi_star=x - params.w_mid * t)
        th = np.tanh(x / a)
        w = mid + half * th
        w_x = (half / a) * (1.0 - th * th)
        w_xx = -(2.0 * half / (a * a)) * th * (1.0 - th * th)
        return BurgersFields(w=w, w_x=w_x, w_xx=w_xx, xi_star=x.copy())

    lo = x - params.w_plus * t
    hi = x - params.w_mid * t
    if xi0 is not None and np.shape(xi0) == np.shape(x):
        xi = np.clip(np.asarray(xi0, dtype=float).copy(), lo, hi)
    else:
        xi = x - mid * t

    converged = np.zeros(x.shape, dtype=bool)
    tol = 1e-13 * (1.0 + np.abs(x) + abs(t))
    for _ in range(40):
        th = np.tanh(xi / a)
        w0 = mid + half * th
        dw0 = (half / a) * (1.0 - th * th)
        r = xi + w0 * t - x
        converged = np.abs(r) <= tol
        if converged.all():
            break
        xi_new = xi - r / (1.0 + dw0 * t)
        xi = np.where(converged, xi, np.clip(xi_new, lo, hi))
    if not converged.all():
        # bisection on the leftover nodes; the bracket is guaranteed
        idx = ~converged
        blo, bhi = lo[idx].copy(), hi[idx].copy()
        xb = x[idx]
        for _ in range(90):
            m = 0.5 * (blo + bhi)
            rm = m + (mid + half * np.tanh(m / a)) * t - xb
            neg = rm < 0.0
            blo = np.where(neg, m, blo)
            bhi = np.where(neg, bhi, m)
        xi[idx] = 0.5 * (blo + bhi)
        th = np.tanh(xi / a)
        w0 = mid + half * th
        dw0 = (half / a) * (1.0 - th * th)

    ddw0 = -(2.0 * half / (a * a)) * th * (1.0 - th * th)
    denom = 1.0 + dw0 * t
    return BurgersFields(w=w0, w_x=dw0 / denom, w_xx=ddw0 / denom**3, xi_star=xi)


def _volume_from_speed(gas: GasParams, w):
    return (w / np.sqrt(gas.gamma)) ** (-2.0 / (gas.gamma + 1.0))


def smooth_rarefaction(params: RarefactionParams, t: float, x, xi0=None):
    """Fields ``(v, u)`` of the smooth approximate rarefaction."""
    f = smooth_rarefaction_derivatives(params, t, x, xi0=xi0)
    return f.v, f.u


def smooth_rarefaction_derivatives(params: RarefactionParams, t: float, x,
                                   xi0=None) -> RarefactionFields:
    """Fields and first/second x-derivatives of the smooth rarefaction.

    Derivatives are exact chain-rule expressions through the Burgers solution:
    ``v_x = w_x / lambda2'(v)`` and ``u_x = -w * v_x``, so ``v_x <= 0`` and
    ``u_x >= 0`` pointwise.
    """
    gas = params.gas
    bf = burgers_exact(params, t, x, xi0=xi0)
    v = _volume_from_speed(gas, bf.w)
    u = rc2_velocity(gas, State(params.v_mid, params.u_mid), v)
    g = gas.gamma
    rg = np.sqrt(g)
    dlam = -rg * (g + 1.0) / 2.0 * v ** (-(g + 3.0) / 2.0)
    ddlam = rg * (g + 1.0) * (g + 3.0) / 4.0 * v ** (-(g + 5.0) / 2.0)
    v_x = bf.w_x / dlam
    v_xx = (bf.w_xx - ddlam * v_x * v_x) / dlam
    u_x = -bf.w * v_x
    u_xx = -(bf.w_x * v_x + bf.w * v_xx)
    return RarefactionFields(v=v, u=u, v_x=v_x, u_x=u_x, v_xx=v_xx, u_xx=u_xx, burgers=bf)


def fan_state(params: RarefactionParams, t: float, x):
    """The inviscid self-similar fan the smooth rarefaction approximates."""
    gas = params.gas
    x = np.asarray(x, dtype=float)
    v = np.empty_like(x)
    if t == 0.0 or params.degenerate:
        left = x < 0.0 if t == 0.0 else np.ones_like(x, dtype=bool)
        v[left] = params.v_mid
        v[~left] = params.v_plus
    else:
        s = x / t
        v[:] = np.clip(_volume_from_speed(gas, np.clip(s, params.w_mid, params.w_plus)),
                       params.v_plus, params.v_mid)
        v[s <= params.w_mid] = params.v_mid
        v[s >= params.w_plus] = params.v_plus
    u = rc2_velocity(gas, State(params.v_mid, params.u_mid), v)
    return v, u


def lp_decay_report(params: RarefactionParams, times) -> dict:
    """Measured gradient norms and fan distance with fitted bound constants.

    For each time the report tabulates ``||(v_x, u_x)||_p`` for
    ``p in {1, 2, inf}`` (pointwise magnitude ``|v_x| + |u_x|``) and the L1
    distance of ``(v, u)`` to the inviscid fan.  Fitted constants divide each
    measurement by its expected envelope ``min(eps2 * a**(-1+1/p),
    eps2**(1/p) * t**(-1+1/p))`` (gradients) and ``eps2 * a`` (fan distance),
    where ``eps2`` is the pressure jump across the rarefaction.
    """
    gas = params.gas
    a = params.a
    p_mid = params.v_mid ** (-gas.gamma)
    p_plus = params.v_plus ** (-gas.gamma)
    eps2 = abs(p_mid - p_plus)
    times = [float(t) for t in times]
    norms = {"1": [], "2": [], "inf": []}
    fan_l1 = []
    for t in times:
        x_lo = params.w_mid * t - 40.0 * a
        x_hi = params.w_plus * t + 40.0 * a
        n = min(int((x_hi - x_lo) / (a / 50.0)) + 1, 400_000)
        x = np.linspace(x_lo, x_hi, n)
        f = smooth_rarefaction_derivatives(params, t, x)
        mag = np.abs(f.v_x) + np.abs(f.u_x)
        norms["1"].append(float(np.trapezoid(mag, x)))
        norms["2"].append(float(np.sqrt(np.trapezoid(mag * mag, x))))
        norms["inf"].append(float(np.max(mag)))
        vf, uf = fan_state(params, t, x)
        fan_l1.append(float(np.trapezoid(np.abs(f.v - vf) + np.abs(f.u - uf), x)))

    fitted = {}
    for p, key in ((1.0, "1"), (2.0, "2"), (np.inf, "inf")):
        ratios = []
        for t, val in zip(times, norms[key]):
            inv_p = 0.0 if np.isinf(p) else 1.0 / p
            envelope = eps2 ** inv_p * t ** (-1.0 + inv_p) if t > 0.0 else np.inf
            bound = min(eps2 * a ** (-1.0 + inv_p), envelope)
            ratios.append(val / bound if bound > 0.0 else 0.0)
        fitted[f"C_{key}"] = max(ratios) if ratios else 0.0
    fitted["C_fan"] = max(d / (eps2 * a) for d in fan_l1) if eps2 > 0.0 else 0.0

    return {"times": times, "lp_norms": norms, "fan_l1": fan_l1,
            "eps2": eps2, "a": a, "fitted": fitted}
