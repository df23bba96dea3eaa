"""Lyapunov spectra, attractor classification and stroboscopic sections.

The spectrum comes from the classic tangent-space method: co-integrate an
orthonormal frame, re-orthonormalize once per drive period, and average the
log stretches. The exponent closest to zero is the referent (it tracks
translations along the orbit); the two largest of the remaining four are
the effective pair that the threshold rule classifies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import ModelBreakdownError, NotConvergedError
from .integrator import IntegratorConfig, _ip_vector
from .model import State, _mp_vector, _STATUS_EXC, _STATUS_MESSAGES, raise_status
from .params import DerivedScales, PhysicalParams, derive_scales

LAMBDA_TR = 1e-3  # exponent threshold separating "zero" from "dynamics"


class AttractorClass(enum.Enum):
    PERIODIC = "periodic"
    QUASIPERIODIC = "quasiperiodic"
    CHAOTIC = "chaotic"
    HYPERCHAOTIC = "hyperchaotic"


class Synchrony(enum.Enum):
    SYNCHRONOUS = "sync"
    ASYNCHRONOUS = "async"
    NOT_APPLICABLE = "na"


@dataclass(frozen=True)
class LyapunovSpectrum:
    """Five exponents (descending, per unit nondimensional time) plus the
    referent bookkeeping and convergence metadata."""

    exponents: tuple[float, float, float, float, float]
    referent_index: int
    effective: tuple[float, float]
    converged: bool
    transient_periods: int
    measure_periods: int
    divergence_rate: float  # time-averaged Jacobian trace over the run

    @property
    def referent(self) -> float:
        return self.exponents[self.referent_index]

    @property
    def total(self) -> float:
        return float(sum(self.exponents))


@dataclass(frozen=True)
class PoincareSet:
    """Stroboscopic samples (r1, u1, r2, u2), one drive period apart."""

    samples: np.ndarray
    theta0: float
    skip: int

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise ValueError(f"samples: expected shape (n, 4), got {arr.shape}")
        object.__setattr__(self, "samples", arr)

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    def swapped(self) -> "PoincareSet":
        """The image of the set under the bubble exchange."""
        return PoincareSet(self.samples[:, [2, 3, 0, 1]].copy(), self.theta0, self.skip)


@dataclass(frozen=True)
class ParamPoint:
    p_ac: float
    d_ratio: float
    eps: float


@dataclass
class AnalysisConfig:
    """Run lengths and thresholds for one attractor analysis."""

    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    transient_periods: int = 2000
    measure_periods: int = 20000
    conv_tol: float = 5e-4
    lambda_tr: float = LAMBDA_TR
    delta_sync: float = 1e-6
    poincare_collect: int = 1000
    period_tol: float = 1e-6
    h_rel: float = 1e-6
    max_extensions: int = 1

    def __post_init__(self):
        if self.transient_periods < 0 or self.measure_periods <= 0:
            raise ValueError("run lengths: transient >= 0 and measure > 0 required")
        if self.conv_tol <= 0.0 or self.lambda_tr <= 0.0:
            raise ValueError("conv_tol and lambda_tr must be positive")


@dataclass
class AttractorRecord:
    """Everything learned about one attractor at one parameter point."""

    point: ParamPoint
    initial_state: State | None
    spectrum: LyapunovSpectrum | None
    attractor_class: AttractorClass | None
    synchrony: Synchrony
    poincare: PoincareSet | None
    period: int | None
    final_state: State | None
    error: str | None = None
    has_counterpart: bool = False

    @property
    def failed(self) -> bool:
        return self.error is not None


def _spectrum_from_history(
    cumlog: np.ndarray,
    interval: float,
    conv_tol: float,
    transient_periods: int,
    trace_total: float,
) -> LyapunovSpectrum:
    n = cumlog.shape[0]
    elapsed = np.arange(1, n + 1) * interval
    estimates = cumlog / elapsed[:, None]
    final = estimates[-1]
    i0 = int(math.floor(0.75 * n))
    window = estimates[i0:]
    drift = np.max(np.abs(window - final[None, :]), axis=0)
    converged = bool(np.all(drift < conv_tol))

    order = np.argsort(final)[::-1]
    exps = tuple(float(final[i]) for i in order)
    referent_index = int(np.argmin(np.abs(np.array(exps))))
    rest = [v for i, v in enumerate(exps) if i != referent_index]
    effective = (rest[0], rest[1])
    return LyapunovSpectrum(
        exponents=exps,
        referent_index=referent_index,
        effective=effective,
        converged=converged,
        transient_periods=transient_periods,
        measure_periods=n,
        divergence_rate=float(trace_total / elapsed[-1]),
    )


def apply_class_rule(l1: float, l2: float, lambda_tr: float = LAMBDA_TR) -> AttractorClass:
    """Threshold rule on the effective pair. Total and disjoint: the
    boundary |l1| = lambda_tr is quasiperiodic, l2 = lambda_tr chaotic."""
    if l1 < -lambda_tr:
        return AttractorClass.PERIODIC
    if l1 <= lambda_tr:
        return AttractorClass.QUASIPERIODIC
    if l2 > lambda_tr:
        return AttractorClass.HYPERCHAOTIC
    return AttractorClass.CHAOTIC


def classify(ls: LyapunovSpectrum, lambda_tr: float = LAMBDA_TR) -> AttractorClass:
    """Classify a converged spectrum; refuse an unconverged one."""
    if not ls.converged:
        raise NotConvergedError(
            "spectrum did not converge; extend the measurement run", spectrum=ls
        )
    return apply_class_rule(ls.effective[0], ls.effective[1], lambda_tr)


def _benettin_measure(
    y: np.ndarray,
    vmat: np.ndarray,
    mp: np.ndarray,
    ip: np.ndarray,
    period: float,
    n_periods: int,
    h_rel: float,
    tau0: float,
    h_start: float,
    log0: np.ndarray,
    trace0: float,
):
    cumlog = np.empty((n_periods, 5))
    samples = np.empty((n_periods, 4))
    tracecum = np.empty(n_periods)
    tau, h, st, done = K.benettin_run(
        y, vmat, tau0, n_periods, period, mp, ip, h_rel, h_start,
        log0, trace0, cumlog, samples, tracecum,
    )
    return tau, h, st, done, cumlog, samples, tracecum


def lyapunov_spectrum(
    x0: State,
    p: PhysicalParams,
    s: DerivedScales,
    cfg: IntegratorConfig = IntegratorConfig(),
    transient_periods: int = 2000,
    measure_periods: int = 20000,
    conv_tol: float = 5e-4,
    h_rel: float = 1e-6,
) -> LyapunovSpectrum:
    """Benettin spectrum after discarding the transient.

    Raises the matching breakdown error (with the partial spectrum attached
    as ``exc.partial_spectrum``) if integration fails mid-run.
    """
    mp = _mp_vector(p, s)
    ip = _ip_vector(cfg, s)
    period = s.period_nd
    y = x0.to_array()
    tau, h, st, _ = K.advance(y, 0.0, transient_periods * period, ip[2], mp, ip)
    if st != K.OK:
        _raise_with_partial(st, None, "transient")
    vmat = np.eye(5)
    tau, h, st, done, cumlog, _, tracecum = _benettin_measure(
        y, vmat, mp, ip, period, measure_periods, h_rel,
        transient_periods * period, h, np.zeros(5), 0.0,
    )
    if st != K.OK:
        partial = None
        if done > 0:
            partial = _spectrum_from_history(
                cumlog[:done], period, conv_tol, transient_periods, tracecum[done - 1]
            )
        _raise_with_partial(st, partial, "measurement")
    return _spectrum_from_history(
        cumlog, period, conv_tol, transient_periods, tracecum[-1]
    )


def _raise_with_partial(status: int, partial, context: str):
    msg = _STATUS_MESSAGES.get(status, f"kernel status {status}")
    exc = _STATUS_EXC.get(status, ModelBreakdownError)(f"{context}: {msg}")
    exc.partial_spectrum = partial
    raise exc


def poincare(
    x0: State,
    p: PhysicalParams,
    s: DerivedScales,
    cfg: IntegratorConfig = IntegratorConfig(),
    skip: int = 1000,
    collect: int = 1000,
) -> PoincareSet:
    """Stroboscopic section: skip periods unrecorded, then collect samples
    at exact multiples of the drive period."""
    if skip < 0 or collect <= 0:
        raise ValueError("poincare: need skip >= 0 and collect > 0")
    mp = _mp_vector(p, s)
    ip = _ip_vector(cfg, s)
    period = s.period_nd
    y = x0.to_array()
    tau, h, st, _ = K.advance(y, 0.0, skip * period, ip[2], mp, ip)
    raise_status(st, "poincare skip")
    out = np.empty((collect, 4))
    _, _, st, _ = K.strobe_run(y, skip * period, collect, period, mp, ip, h, out)
    raise_status(st, "poincare collect")
    return PoincareSet(samples=out, theta0=x0.theta, skip=skip)


def detect_period(ps: PoincareSet, tol: float = 1e-6) -> int | None:
    """Smallest shift p <= count/4 under which every sample returns to
    within tol of itself; None when there is no such shift."""
    if tol <= 0.0:
        raise ValueError(f"tol: must be positive, got {tol!r}")
    samples = ps.samples
    n = ps.count
    for per in range(1, n // 4 + 1):
        diff = samples[per:] - samples[:-per]
        if float(np.max(np.sqrt(np.sum(diff * diff, axis=1)))) < tol:
            return per
    return None


def is_synchronous(ps: PoincareSet, delta_sync: float = 1e-6) -> bool:
    """True iff every sample sits on the in-phase manifold within
    delta_sync (Euclidean distance in (r1-r2, u1-u2))."""
    d1 = ps.samples[:, 0] - ps.samples[:, 2]
    d2 = ps.samples[:, 1] - ps.samples[:, 3]
    return float(np.max(np.sqrt(d1 * d1 + d2 * d2))) < delta_sync


def analyze(
    x0: State,
    p: PhysicalParams,
    s: DerivedScales | None = None,
    cfg: AnalysisConfig | None = None,
) -> AttractorRecord:
    """Full attractor work-up at one parameter point.

    Skips the transient, runs the tangent-space measurement (extending it
    up to ``max_extensions`` times if the convergence gate fails), collects
    the Poincare set from the measurement's own stroboscopic samples, and
    assembles the record. Breakdown errors mark the record as failed
    instead of raising, so sweeps and charts stay total.
    """
    if s is None:
        s = derive_scales(p)
    if cfg is None:
        cfg = AnalysisConfig()
    point = ParamPoint(p_ac=p.p_ac, d_ratio=s.d_ratio, eps=p.eps)
    mp = _mp_vector(p, s)
    ip = _ip_vector(cfg.integrator, s)
    period = s.period_nd

    def _failed(msg, initial=None, spectrum=None):
        return AttractorRecord(
            point=point,
            initial_state=initial,
            spectrum=spectrum,
            attractor_class=None,
            synchrony=Synchrony.NOT_APPLICABLE,
            poincare=None,
            period=None,
            final_state=None,
            error=msg,
        )

    y = x0.to_array()
    tau, h, st, _ = K.advance(y, 0.0, cfg.transient_periods * period, ip[2], mp, ip)
    if st != K.OK:
        return _failed(f"transient: {_STATUS_MESSAGES.get(st, st)}")
    initial = State.from_array(y)

    vmat = np.eye(5)
    log0 = np.zeros(5)
    trace0 = 0.0
    cumlog_parts: list[np.ndarray] = []
    sample_parts: list[np.ndarray] = []
    trace_parts: list[np.ndarray] = []
    n_done = 0
    spectrum = None
    for attempt in range(cfg.max_extensions + 1):
        tau, h, st, done, cumlog, samples, tracecum = _benettin_measure(
            y, vmat, mp, ip, period, cfg.measure_periods, cfg.h_rel,
            tau, h, log0, trace0,
        )
        if st != K.OK:
            partial = None
            total = n_done + done
            if total > 0:
                hist = np.concatenate(cumlog_parts + [cumlog[:done]])
                traces = np.concatenate(trace_parts + [tracecum[:done]])
                partial = _spectrum_from_history(
                    hist, period, cfg.conv_tol, cfg.transient_periods, traces[-1]
                )
            return _failed(
                f"measurement: {_STATUS_MESSAGES.get(st, st)} after "
                f"{total} periods",
                initial=initial,
                spectrum=partial,
            )
        cumlog_parts.append(cumlog)
        sample_parts.append(samples)
        trace_parts.append(tracecum)
        n_done += done
        log0 = cumlog[-1].copy()
        trace0 = tracecum[-1]
        hist = np.concatenate(cumlog_parts) if len(cumlog_parts) > 1 else cumlog_parts[0]
        traces = np.concatenate(trace_parts) if len(trace_parts) > 1 else trace_parts[0]
        spectrum = _spectrum_from_history(
            hist, period, cfg.conv_tol, cfg.transient_periods, traces[-1]
        )
        if spectrum.converged:
            break

    all_samples = (
        np.concatenate(sample_parts) if len(sample_parts) > 1 else sample_parts[0]
    )
    # represent the attractor by the measurement tail: those samples have
    # shed the most transient
    n_ps = min(cfg.poincare_collect, all_samples.shape[0])
    ps = PoincareSet(
        samples=all_samples[-n_ps:].copy(),
        theta0=x0.theta,
        skip=cfg.transient_periods + (all_samples.shape[0] - n_ps),
    )
    attractor_class = apply_class_rule(
        spectrum.effective[0], spectrum.effective[1], cfg.lambda_tr
    )
    if p.eps == 1.0:
        synchrony = (
            Synchrony.SYNCHRONOUS
            if is_synchronous(ps, cfg.delta_sync)
            else Synchrony.ASYNCHRONOUS
        )
    else:
        synchrony = Synchrony.NOT_APPLICABLE
    return AttractorRecord(
        point=point,
        initial_state=initial,
        spectrum=spectrum,
        attractor_class=attractor_class,
        synchrony=synchrony,
        poincare=ps,
        period=detect_period(ps, cfg.period_tol),
        final_state=State.from_array(y),
    )
