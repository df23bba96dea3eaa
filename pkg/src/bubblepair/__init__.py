"""Two coupled, periodically driven microbubble oscillators: trajectories,
Lyapunov spectra, Poincare sections, attractor classification, symmetry-
breaking sweeps and two-parameter regime charts."""

from .chaos import (
    AnalysisConfig,
    AttractorClass,
    AttractorRecord,
    LyapunovSpectrum,
    ParamPoint,
    PoincareSet,
    Synchrony,
    analyze,
    classify,
    detect_period,
    is_synchronous,
    lyapunov_spectrum,
    poincare,
)
from .continuation import (
    Branch,
    BranchPoint,
    ChartConfig,
    ChartGrid,
    ProbeBox,
    SweepConfig,
    chart,
    find_coexisting,
    hausdorff,
    monostability_probe,
    sweep,
)
from .errors import (
    BubblePairError,
    InvalidParamsError,
    ModelBreakdownError,
    NearSingularError,
    NotConvergedError,
    RadiusFloorError,
    StepUnderflowError,
    TangentDegenerateError,
)
from .integrator import (
    IntegratorConfig,
    TangentBundle,
    integrate_fixed,
    integrate_to,
    integrate_with_tangents,
    propagate_tangents,
    step,
)
from .model import (
    Deriv,
    State,
    acceleration,
    jacobian,
    rest_state,
    shell_pressure,
    swap,
    sync_deviation,
    vector_field,
)
from .params import DerivedScales, PhysicalParams, derive_scales
from .runio import RunConfig, RunManifest, parse_config

__version__ = "0.1.0"
