"""Physical parameters of the two-bubble system and their derived scales.

All inputs are SI. The simulation itself runs in nondimensional variables:
radii are measured in units of the first bubble's equilibrium radius, time
in units of 1/omega0 where omega0 is the linear resonance frequency of the
first bubble, and wall velocities in units of r10*omega0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidParamsError

# SonoVue-type agent in water, adiabatic gas, 2.87e7 rad/s drive.
DEFAULT_P_STAT = 101325.0
DEFAULT_P_V = 2330.0
DEFAULT_SIGMA = 0.0725
DEFAULT_RHO = 1000.0
DEFAULT_ETA_L = 0.001
DEFAULT_C = 1500.0
DEFAULT_GAMMA = 4.0 / 3.0
DEFAULT_CHI = 0.22
DEFAULT_KAPPA_S = 2.5e-9
DEFAULT_R10 = 1.72e-6
DEFAULT_OMEGA = 2.87e7
DEFAULT_P_AC = 1.2e6
DEFAULT_D_RATIO = 21.0


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional constants plus drive, separation and radii ratio.

    ``eps`` is the equilibrium-radius ratio of bubble 2 to bubble 1;
    ``d`` is the center-to-center separation in meters.
    """

    p_stat: float = DEFAULT_P_STAT
    p_v: float = DEFAULT_P_V
    sigma: float = DEFAULT_SIGMA
    rho: float = DEFAULT_RHO
    eta_l: float = DEFAULT_ETA_L
    c: float = DEFAULT_C
    gamma: float = DEFAULT_GAMMA
    chi: float = DEFAULT_CHI
    kappa_s: float = DEFAULT_KAPPA_S
    r10: float = DEFAULT_R10
    eps: float = 1.0
    d: float = DEFAULT_D_RATIO * DEFAULT_R10
    p_ac: float = DEFAULT_P_AC
    omega: float = DEFAULT_OMEGA

    def __post_init__(self):
        positive = ("p_stat", "rho", "c", "gamma", "r10", "eps", "d", "omega")
        # sigma/chi/kappa_s/eta_l/p_v/p_ac may legitimately be zero
        nonneg = ("p_v", "sigma", "eta_l", "chi", "kappa_s", "p_ac")
        for name in positive:
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidParamsError(f"{name}: must be a finite positive number, got {v!r}")
        for name in nonneg:
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise InvalidParamsError(f"{name}: must be finite and >= 0, got {v!r}")
        if self.p_stat <= self.p_v:
            raise InvalidParamsError(
                f"p_stat: must exceed p_v ({self.p_stat!r} <= {self.p_v!r})"
            )
        if self.d <= self.r10 * (1.0 + self.eps):
            raise InvalidParamsError(
                f"d: bubbles overlap at rest, need d > r10*(1+eps) = "
                f"{self.r10 * (1.0 + self.eps):.6g}, got {self.d!r}"
            )

    @property
    def d_ratio(self) -> float:
        return self.d / self.r10

    def with_drive(self, p_ac=None, d_ratio=None, eps=None) -> "PhysicalParams":
        """Copy with the three swept control parameters replaced."""
        kw = {}
        if p_ac is not None:
            kw["p_ac"] = float(p_ac)
        if d_ratio is not None:
            kw["d"] = float(d_ratio) * self.r10
        if eps is not None:
            kw["eps"] = float(eps)
        return replace(self, **kw)


@dataclass(frozen=True)
class DerivedScales:
    """Scales derived from PhysicalParams; everything downstream uses these."""

    p0: float  # effective static pressure, Pa
    omega0: float  # linear resonance frequency of bubble 1, rad/s
    t_drive: float  # drive period, s
    omega_nd: float  # omega / omega0
    d_ratio: float  # d / r10

    @property
    def period_nd(self) -> float:
        """Drive period in nondimensional time units."""
        return 2.0 * math.pi / self.omega_nd


def derive_scales(p: PhysicalParams) -> DerivedScales:
    """Compute the static pressure and resonance frequency of bubble 1.

    omega0**2 = (3*gamma*p0 + 2*(3*gamma - 1)*sigma/r10 + 4*chi/r10) / (rho*r10**2)
    """
    p0 = p.p_stat - p.p_v
    radicand = (
        3.0 * p.gamma * p0
        + 2.0 * (3.0 * p.gamma - 1.0) * p.sigma / p.r10
        + 4.0 * p.chi / p.r10
    ) / (p.rho * p.r10 * p.r10)
    if radicand <= 0.0:
        raise InvalidParamsError(f"omega0: nonpositive radicand {radicand!r}")
    omega0 = math.sqrt(radicand)
    return DerivedScales(
        p0=p0,
        omega0=omega0,
        t_drive=2.0 * math.pi / p.omega,
        omega_nd=p.omega / omega0,
        d_ratio=p.d / p.r10,
    )
