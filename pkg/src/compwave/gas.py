"""Pressure law, characteristic speeds and relative (Bregman) quantities.

The material model is the isentropic gamma-law gas in Lagrangian coordinates:
pressure ``p(v) = v**(-gamma)`` with ``gamma > 1``, where ``v`` is the specific
volume.  The viscosity law tied to it is ``b(v) = b * v**(-alpha)`` with the
amplitude ``b`` fixed to ``gamma``; the exponent window ``0 < alpha <= gamma
<= alpha + 1`` keeps the transformed diffusion exponent ``beta = gamma - alpha``
inside ``[0, 1]``.

All functions accept scalars or numpy arrays for the volume argument and
reject non-positive volumes loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GasParams",
    "State",
    "pressure",
    "pressure_derivative",
    "lambda1",
    "lambda2",
    "potential_Q",
    "relative_Q",
    "relative_p",
    "relative_eta",
]


@dataclass(frozen=True)
class GasParams:
    """Adiabatic exponent and viscosity exponent.

    Attributes
    ----------
    gamma : float
        Adiabatic exponent, must satisfy ``gamma > 1``.
    alpha : float
        Viscosity exponent, must satisfy ``0 < alpha <= gamma <= alpha + 1``.
    """

    gamma: float = 1.4
    alpha: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not 0.0 < self.alpha <= self.gamma <= self.alpha + 1.0:
            raise ValueError(
                "viscosity exponent must satisfy 0 < alpha <= gamma <= alpha + 1, "
                f"got alpha={self.alpha}, gamma={self.gamma}"
            )

    @property
    def b_coef(self) -> float:
        """Viscosity amplitude; fixed to gamma by the model."""
        return self.gamma

    @property
    def beta(self) -> float:
        """Diffusion exponent ``gamma - alpha`` of the transformed system, in [0, 1]."""
        return self.gamma - self.alpha


@dataclass(frozen=True)
class State:
    """Pointwise state (specific volume, velocity).

    ``kind`` flags whether the velocity slot holds the fluid velocity ``"u"``
    or the gradient-corrected velocity ``"h"`` of the transformed system.
    """

    v: float
    u: float
    kind: str = "u"

    def __post_init__(self):
        if not self.v > 0.0:
            raise ValueError(f"specific volume must be positive, got {self.v}")
        if self.kind not in ("u", "h"):
            raise ValueError(f"state kind must be 'u' or 'h', got {self.kind!r}")


def _check_volume(v):
    arr = np.asarray(v)
    if np.any(~(arr > 0.0)):
        bad = arr[~(arr > 0.0)] if arr.ndim else arr
        raise ValueError(f"specific volume must be positive, got {bad}")
    return arr


def pressure(gas: GasParams, v):
    """Gamma-law pressure ``v**(-gamma)``."""
    v = _check_volume(v)
    return v ** (-gas.gamma)


def pressure_derivative(gas: GasParams, v):
    """``p'(v) = -gamma * v**(-gamma - 1)``, strictly negative."""
    v = _check_volume(v)
    return -gas.gamma * v ** (-gas.gamma - 1.0)


def lambda1(gas: GasParams, v):
    """Backward characteristic speed ``-sqrt(-p'(v))``."""
    v = _check_volume(v)
    return -np.sqrt(gas.gamma) * v ** (-(gas.gamma + 1.0) / 2.0)


def lambda2(gas: GasParams, v):
    """Forward characteristic speed ``+sqrt(-p'(v))``; strictly decreasing in v."""
    v = _check_volume(v)
    return np.sqrt(gas.gamma) * v ** (-(gas.gamma + 1.0) / 2.0)


def potential_Q(gas: GasParams, v):
    """Convex potential ``Q(v) = v**(1-gamma) / (gamma-1)`` with ``Q' = -p``."""
    v = _check_volume(v)
    return v ** (1.0 - gas.gamma) / (gas.gamma - 1.0)


def relative_Q(gas: GasParams, v, w):
    """Bregman distance of the potential: ``Q(v) - Q(w) + p(w)*(v - w)``.

    Nonnegative, vanishing exactly at ``v == w``; locally quadratic with
    curvature ``-p'(w)``.
    """
    v = _check_volume(v)
    w = _check_volume(w)
    return potential_Q(gas, v) - potential_Q(gas, w) + pressure(gas, w) * (v - w)


def relative_p(gas: GasParams, v, w):
    """Bregman distance of the pressure: ``p(v) - p(w) - p'(w)*(v - w)``.

    Nonnegative by convexity of p.
    """
    v = _check_volume(v)
    w = _check_volume(w)
    return pressure(gas, v) - pressure(gas, w) - pressure_derivative(gas, w) * (v - w)


def _vu(U):
    if isinstance(U, State):
        return U.v, U.u
    v, u = U
    return v, u


def relative_eta(gas: GasParams, U1, U2):
    """Relative entropy ``0.5*(u1 - u2)**2 + relative_Q(v1, v2)``.

    Accepts ``State`` instances or ``(v, velocity)`` pairs (arrays allowed).
    """
    v1, u1 = _vu(U1)
    v2, u2 = _vu(U2)
    du = np.asarray(u1) - np.asarray(u2)
    return 0.5 * du * du + relative_Q(gas, v1, v2)
