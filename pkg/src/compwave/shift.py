"""Dynamic shift tracking the viscous shock inside the composite wave.

The shift ``X(tau)`` follows a four-branch ODE driven by the functional ``Y``
and by ``|J_bad|``; the branches join continuously at the knots
``Y = -eps1**2``, ``Y = 0`` and ``Y = +eps1**2``:

    Xdot = -sigma1/2                          if Y <= -eps1**2
    Xdot = (sigma1/2) * Y / eps1**2           if -eps1**2 <= Y <= 0
    Xdot = -(Y/eps1**4) * (2|J_bad| + 1)      if 0 <= Y <= eps1**2
    Xdot = -(1/eps1**2) * (2|J_bad| + 1)      if Y >= eps1**2

with ``X(0) = 0``.  Since ``sigma1 < 0``, the first two branches push the
shift right by at most ``|sigma1|/2`` while the last two pull it left without
a floor, which gives the one-sided bounds ``Xdot <= |sigma1|/2`` and
``X(tau) <= |sigma1| * tau / 2``.

The solver advances ``X`` in lockstep with the PDE: ``Xdot`` is evaluated
once per step from the pre-step state and held constant through the
Runge-Kutta stages (stage boundary data use ``X + c_s * dtau * Xdot``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["shift_rhs", "advance_shift", "ShiftTrace"]


def shift_rhs(Y: float, J_bad: float, eps1: float, sigma1: float) -> tuple[float, int]:
    """Right-hand side of the shift ODE; returns ``(Xdot, branch)``.

    ``branch`` numbers the four cases 1..4 from most negative ``Y`` up.
    """
    if not eps1 > 0.0:
        raise ValueError(f"shock strength eps1 must be positive, got {eps1}")
    e2 = eps1 * eps1
    gain = 2.0 * abs(J_bad) + 1.0
    if Y <= -e2:
        return -0.5 * sigma1, 1
    if Y <= 0.0:
        return 0.5 * sigma1 * Y / e2, 2
    if Y <= e2:
        return -(Y / (e2 * e2)) * gain, 3
    return -gain / e2, 4


def advance_shift(X: float, Xdot: float, dtau: float) -> float:
    """Explicit shift update over one step (the rate is held per step)."""
    return X + dtau * Xdot


@dataclass
class ShiftTrace:
    """Per-step history of the shift dynamics."""

    taus: list = field(default_factory=list)
    X: list = field(default_factory=list)
    Xdot: list = field(default_factory=list)
    Y: list = field(default_factory=list)
    J_bad: list = field(default_factory=list)
    branch: list = field(default_factory=list)

    def append(self, tau, X, Xdot, Y, J_bad, branch):
        self.taus.append(tau)
        self.X.append(X)
        self.Xdot.append(Xdot)
        self.Y.append(Y)
        self.J_bad.append(J_bad)
        self.branch.append(branch)

    def as_arrays(self) -> dict:
        return {"tau": np.asarray(self.taus),
                "X": np.asarray(self.X),
                "Xdot": np.asarray(self.Xdot),
                "Y": np.asarray(self.Y),
                "J_bad": np.asarray(self.J_bad),
                "branch": np.asarray(self.branch)}
