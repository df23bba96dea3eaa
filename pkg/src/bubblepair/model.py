"""Nondimensional two-bubble model: state type, vector field, symmetry tools.

The governing equations are two compressibility-corrected Rayleigh-Plesset
(Keller-Miksis) oscillators with shell elasticity/viscosity, coupled through
the neighbor's volume acceleration and driven by a common periodic pressure.
Radii are in units of bubble 1's equilibrium radius, time in 1/omega0.
Both wall accelerations appear linearly, so the vector field solves a 2x2
linear system in closed form at every evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import (
    InvalidParamsError,
    ModelBreakdownError,
    NearSingularError,
    RadiusFloorError,
    StepUnderflowError,
    TangentDegenerateError,
)
from .params import DerivedScales, PhysicalParams

TWO_PI = 2.0 * math.pi

RADIUS_FLOOR = 0.01  # below this the shell model is meaningless
DET_TOL = 1e-12  # |det A| <= DET_TOL * ||A||_F^2 counts as singular


@dataclass(frozen=True)
class State:
    """Phase point (r1, u1, r2, u2, theta); theta is wrapped to [0, 2*pi)."""

    r1: float
    u1: float
    r2: float
    u2: float
    theta: float = 0.0

    def __post_init__(self):
        for name in ("r1", "u1", "r2", "u2", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParamsError(f"{name}: must be finite")
        if self.r1 <= 0.0 or self.r2 <= 0.0:
            raise ModelBreakdownError(
                f"nonpositive radius in state (r1={self.r1!r}, r2={self.r2!r})"
            )
        th = self.theta % TWO_PI
        if th >= TWO_PI:
            th -= TWO_PI
        object.__setattr__(self, "theta", th)

    def to_array(self) -> np.ndarray:
        return np.array([self.r1, self.u1, self.r2, self.u2, self.theta])

    @classmethod
    def from_array(cls, y) -> "State":
        return cls(float(y[0]), float(y[1]), float(y[2]), float(y[3]), float(y[4]))


@dataclass(frozen=True)
class Deriv:
    """Time derivative of a State per unit nondimensional time."""

    dr1: float
    du1: float
    dr2: float
    du2: float
    dtheta: float

    def to_array(self) -> np.ndarray:
        return np.array([self.dr1, self.du1, self.dr2, self.du2, self.dtheta])


def swap(x: State) -> State:
    """Exchange the two bubbles' coordinates. Involution."""
    return State(x.r2, x.u2, x.r1, x.u1, x.theta)


def sync_deviation(x: State) -> float:
    """Euclidean distance from the in-phase manifold r1=r2, u1=u2."""
    return math.hypot(x.r1 - x.r2, x.u1 - x.u2)


def rest_state(p: PhysicalParams, theta: float = 0.0) -> State:
    """Both bubbles at their own equilibrium radius, walls at rest."""
    return State(1.0, 0.0, p.eps, 0.0, theta)


def _mp_vector(
    p: PhysicalParams,
    s: DerivedScales,
    r_floor: float = RADIUS_FLOOR,
    det_tol: float = DET_TOL,
) -> np.ndarray:
    w0 = s.omega0
    pscale = p.rho * p.r10 * p.r10 * w0 * w0
    vscale = p.rho * p.r10 * p.r10 * w0
    return np.array(
        [
            s.p0 / pscale,
            2.0 * p.sigma / (pscale * p.r10),
            4.0 * p.chi / (pscale * p.r10),
            4.0 * p.eta_l / vscale,
            4.0 * p.kappa_s / (vscale * p.r10),
            p.c / (p.r10 * w0),
            p.p_ac / pscale,
            s.omega_nd,
            p.eps,
            p.r10 / p.d,
            3.0 * p.gamma,
            r_floor,
            det_tol,
        ]
    )


_STATUS_MESSAGES = {
    K.ERR_RADIUS_DOMAIN: "nonpositive bubble radius",
    K.ERR_SINGULAR: "near-singular wall-acceleration system",
    K.ERR_RADIUS_FLOOR: f"bubble radius fell below the collapse floor {RADIUS_FLOOR}",
    K.ERR_STEP_UNDERFLOW: "adaptive step size underflow",
    K.ERR_TANGENT_DEGENERATE: "tangent frame lost rank",
    K.ERR_NONFINITE: "non-finite value in the vector field",
}

_STATUS_EXC = {
    K.ERR_RADIUS_DOMAIN: ModelBreakdownError,
    K.ERR_SINGULAR: NearSingularError,
    K.ERR_RADIUS_FLOOR: RadiusFloorError,
    K.ERR_STEP_UNDERFLOW: StepUnderflowError,
    K.ERR_TANGENT_DEGENERATE: TangentDegenerateError,
    K.ERR_NONFINITE: ModelBreakdownError,
}


def raise_status(status: int, context: str = ""):
    """Translate a kernel status code into the matching exception."""
    if status == K.OK:
        return
    msg = _STATUS_MESSAGES.get(status, f"kernel status {status}")
    if context:
        msg = f"{context}: {msg}"
    raise _STATUS_EXC.get(status, ModelBreakdownError)(msg)


def shell_pressure(
    r: float,
    u: float,
    bubble_index: int,
    p: PhysicalParams,
    s: DerivedScales,
    theta: float = 0.0,
) -> float:
    """Nondimensional wall pressure of one bubble (gas, surface tension,
    liquid and shell viscosity, shell elasticity, ambient and drive terms).

    Zero at the bubble's own equilibrium radius with resting wall and no
    drive. ``bubble_index`` is 1 or 2.
    """
    if r <= 0.0:
        raise ValueError(f"r: radius must be positive, got {r!r}")
    if bubble_index not in (1, 2):
        raise ValueError(f"bubble_index: must be 1 or 2, got {bubble_index!r}")
    mp = _mp_vector(p, s)
    r_eq = 1.0 if bubble_index == 1 else p.eps
    return float(K.press_nd(r, u, r_eq, theta, mp))


def acceleration(
    x: State, p: PhysicalParams, s: DerivedScales, det_tol: float = DET_TOL
) -> tuple[float, float]:
    """Both wall accelerations from the closed-form 2x2 solve."""
    mp = _mp_vector(p, s, det_tol=det_tol)
    a1, a2, st = K.accel(x.to_array(), mp)
    raise_status(st, "acceleration")
    return float(a1), float(a2)


def vector_field(x: State, p: PhysicalParams, s: DerivedScales) -> Deriv:
    """Right-hand side of the autonomous 5D system."""
    mp = _mp_vector(p, s)
    out = np.empty(5)
    st = K.vf(x.to_array(), mp, out)
    raise_status(st, "vector_field")
    return Deriv(*[float(v) for v in out])


def jacobian(
    x: State, p: PhysicalParams, s: DerivedScales, h_rel: float = 1e-6
) -> np.ndarray:
    """5x5 central-difference Jacobian of the vector field at x.

    Component k is displaced by h_rel*max(|x_k|, 1). The theta row is
    identically zero; the theta column carries the drive sensitivity.
    """
    if h_rel <= 0.0:
        raise ValueError(f"h_rel: must be positive, got {h_rel!r}")
    mp = _mp_vector(p, s)
    jac = np.empty((5, 5))
    st = K.fd_jacobian(
        x.to_array(), mp, h_rel, jac, np.empty(5), np.empty(5), np.empty(5)
    )
    raise_status(st, "jacobian")
    return jac
