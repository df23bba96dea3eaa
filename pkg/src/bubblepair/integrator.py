"""Adaptive embedded Cash-Karp 4(5) stepping with stroboscopic landing.

Sample times are hit by shortening the final step, never by interpolation,
so Poincare sections are bit-reproducible. Tangent vectors ride along
variationally (dv/dtau = J v with the finite-difference Jacobian evaluated
at each stage's base state).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import InvalidParamsError
from .model import State, _mp_vector, raise_status
from .params import DerivedScales, PhysicalParams

STEP_UNDERFLOW_FRACTION = 1e-14  # of the drive period


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step bounds. h0 and h_max are fractions of the
    drive period."""

    rtol: float = 1e-10
    atol: float = 1e-12
    h0: float = 0.01
    h_max: float = 0.1
    safety: float = 0.9

    def __post_init__(self):
        if not (self.rtol > 0.0 and self.atol > 0.0):
            raise InvalidParamsError(
                f"rtol/atol: must be positive, got {self.rtol!r}/{self.atol!r}"
            )
        if not (0.0 < self.h0 <= self.h_max):
            raise InvalidParamsError(
                f"h0: need 0 < h0 <= h_max, got {self.h0!r} vs {self.h_max!r}"
            )
        if not (0.0 < self.safety < 1.0):
            raise InvalidParamsError(f"safety: must be in (0, 1), got {self.safety!r}")


def _ip_vector(cfg: IntegratorConfig, s: DerivedScales) -> np.ndarray:
    t = s.period_nd
    return np.array(
        [
            cfg.rtol,
            cfg.atol,
            cfg.h0 * t,
            cfg.h_max * t,
            cfg.safety,
            STEP_UNDERFLOW_FRACTION * t,
        ]
    )


def step(
    x: State,
    h: float,
    p: PhysicalParams,
    s: DerivedScales,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> tuple[State, float, float]:
    """One embedded trial step of size h.

    Returns (candidate state, weighted RMS error, next step size). The step
    is acceptable iff the error is <= 1; the caller decides. The next step
    follows h*safety*err**(-1/5) clamped to [h/10, 5h] and the period cap.
    """
    if h <= 0.0:
        raise InvalidParamsError(f"h: step must be positive, got {h!r}")
    mp = _mp_vector(p, s)
    ip = _ip_vector(cfg, s)
    y = x.to_array()
    ynew = np.empty(5)
    yerr = np.empty(5)
    st = K._trial_step(y, h, mp, ynew, yerr, np.empty((6, 5)), np.empty(5))
    raise_status(st, "step")
    err = float(K._err_norm(y, ynew, yerr, cfg.rtol, cfg.atol))
    h_next = float(K._controller(h, err, cfg.safety, ip[3]))
    return State.from_array(ynew), err, h_next


def integrate_to(
    x: State,
    tau_target: float,
    p: PhysicalParams,
    s: DerivedScales,
    cfg: IntegratorConfig = IntegratorConfig(),
    tau0: float = 0.0,
) -> State:
    """Advance from tau0 to tau_target, landing exactly on the target."""
    if tau_target < tau0:
        raise InvalidParamsError(
            f"tau_target: monotone time only, {tau_target!r} < {tau0!r}"
        )
    if tau_target == tau0:
        return x
    mp = _mp_vector(p, s)
    ip = _ip_vector(cfg, s)
    y = x.to_array()
    _, _, st, _ = K.advance(y, tau0, tau_target, ip[2], mp, ip)
    raise_status(st, "integrate_to")
    return State.from_array(y)


def integrate_fixed(
    x: State, h: float, n_steps: int, p: PhysicalParams, s: DerivedScales
) -> State:
    """Fixed-step advance (no error control); for order measurements."""
    if h <= 0.0 or n_steps < 0:
        raise InvalidParamsError("integrate_fixed: need h > 0 and n_steps >= 0")
    mp = _mp_vector(p, s)
    y = x.to_array()
    st = K.integrate_fixed(y, h, n_steps, mp)
    raise_status(st, "integrate_fixed")
    return State.from_array(y)


def _identity_frame() -> np.ndarray:
    return np.eye(5)


@dataclass
class TangentBundle:
    """A base phase point with five tangent columns."""

    base: State
    vectors: np.ndarray = field(default_factory=_identity_frame)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.shape != (5, 5):
            raise InvalidParamsError(f"vectors: expected shape (5, 5), got {v.shape}")
        if np.linalg.matrix_rank(v) < 5:
            raise InvalidParamsError("vectors: tangent frame must have full rank")
        self.vectors = v


def propagate_tangents(
    x: State,
    vectors: np.ndarray,
    tau_span: float,
    p: PhysicalParams,
    s: DerivedScales,
    cfg: IntegratorConfig = IntegratorConfig(),
    h_rel: float = 1e-6,
    tau0: float = 0.0,
) -> tuple[State, np.ndarray, float]:
    """Raw tangent propagation over tau_span with no renormalization.

    Returns (end state, propagated columns, accumulated divergence
    integral, i.e. the integral of trace J along the accepted path).
    """
    if tau_span < 0.0:
        raise InvalidParamsError(f"tau_span: must be >= 0, got {tau_span!r}")
    mp = _mp_vector(p, s)
    ip = _ip_vector(cfg, s)
    y = x.to_array()
    vmat = np.array(vectors, dtype=float)
    _, _, st, trace_int = K.advance_tan(
        y, vmat, tau0, tau0 + tau_span, ip[2], mp, ip, h_rel
    )
    raise_status(st, "propagate_tangents")
    return State.from_array(y), vmat, float(trace_int)


def integrate_with_tangents(
    tb: TangentBundle,
    tau_span: float,
    p: PhysicalParams,
    s: DerivedScales,
    cfg: IntegratorConfig = IntegratorConfig(),
    renorm_interval: float | None = None,
    h_rel: float = 1e-6,
) -> tuple[TangentBundle, np.ndarray]:
    """Co-integrate base and tangents; Gram-Schmidt every renorm_interval.

    The default interval is one drive period. Returns the renormalized
    bundle and the per-column accumulated log stretch.
    """
    if renorm_interval is None:
        renorm_interval = s.period_nd
    if renorm_interval <= 0.0:
        raise InvalidParamsError(
            f"renorm_interval: must be positive, got {renorm_interval!r}"
        )
    n_full = int(math.floor(tau_span / renorm_interval + 1e-12))
    remainder = tau_span - n_full * renorm_interval
    if remainder < 1e-12 * max(tau_span, 1.0):
        remainder = 0.0

    x = tb.base
    vmat = np.array(tb.vectors, dtype=float)
    log_norms = np.zeros(5)
    ln = np.empty(5)
    tau = 0.0
    for _ in range(n_full):
        x, vmat, _ = propagate_tangents(
            x, vmat, renorm_interval, p, s, cfg, h_rel, tau0=tau
        )
        tau += renorm_interval
        st = K.gram_schmidt(vmat, ln)
        raise_status(st, "integrate_with_tangents")
        log_norms += ln
    if remainder > 0.0:
        x, vmat, _ = propagate_tangents(x, vmat, remainder, p, s, cfg, h_rel, tau0=tau)
        st = K.gram_schmidt(vmat, ln)
        raise_status(st, "integrate_with_tangents")
        log_norms += ln
    return TangentBundle(base=x, vectors=vmat), log_norms
