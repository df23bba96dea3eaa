"""Branch continuation: one-parameter sweeps, coexistence discovery and
two-parameter charts.

All continuation is by initial-condition inheritance: the final state of
the analysis at one parameter value seeds the transient at the next. Jumps
between attractors are detected by a class change combined with a large
Hausdorff distance between consecutive Poincare sets; the branch then keeps
following whatever attractor the trajectory landed on, with the event
logged. Chart traversal is seed-column-first, then each row continues
horizontally from its column cell; rows are independent and run in
parallel.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from .chaos import (
    AnalysisConfig,
    AttractorClass,
    AttractorRecord,
    PoincareSet,
    analyze,
)
from .errors import InvalidParamsError, ModelBreakdownError, NotConvergedError
from .model import State
from .params import DerivedScales, PhysicalParams, derive_scales

JUMP_THRESHOLD = 0.05  # Hausdorff distance marking an attractor change

SWEEPABLE = ("eps", "pac", "d_ratio")


def hausdorff(a: PoincareSet, b: PoincareSet) -> float:
    """Symmetric Hausdorff distance between two stroboscopic sets."""
    d_ab = directed_hausdorff(a.samples, b.samples)[0]
    d_ba = directed_hausdorff(b.samples, a.samples)[0]
    return float(max(d_ab, d_ba))


def same_attractor(
    a: AttractorRecord,
    b: AttractorRecord,
    threshold: float = JUMP_THRESHOLD,
    check_swap: bool = False,
) -> tuple[bool, bool]:
    """(same, via_swap): records describe the same attractor when classes
    match and the Poincare sets lie within the jump threshold; with
    check_swap, the mirror image of b also counts (symmetric counterpart).
    """
    if a.attractor_class != b.attractor_class:
        return False, False
    if a.poincare is None or b.poincare is None:
        return False, False
    if hausdorff(a.poincare, b.poincare) <= threshold:
        return True, False
    if check_swap and hausdorff(a.poincare, b.poincare.swapped()) <= threshold:
        return True, True
    return False, False


def _with_param(p: PhysicalParams, name: str, value: float) -> PhysicalParams:
    if name == "eps":
        return p.with_drive(eps=value)
    if name == "pac":
        return p.with_drive(p_ac=value)
    if name == "d_ratio":
        return p.with_drive(d_ratio=value)
    raise InvalidParamsError(f"parameter: unknown sweep axis {name!r}")


@dataclass(frozen=True)
class SweepConfig:
    """One-parameter continuation setup; the axis defaults to the radii
    ratio and the start to the symmetric case."""

    lo: float
    hi: float
    step: float
    start: float = 1.0
    parameter: str = "eps"
    seeds: tuple[tuple[str, State], ...] = ()
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    jump_threshold: float = JUMP_THRESHOLD
    threads: int | None = None

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvalidParamsError(f"range: need lo <= hi, got [{self.lo}, {self.hi}]")
        if self.step <= 0.0:
            raise InvalidParamsError(f"step: must be positive, got {self.step!r}")
        if not (self.lo <= self.start <= self.hi):
            raise InvalidParamsError(
                f"start: {self.start!r} outside [{self.lo}, {self.hi}]"
            )
        if self.parameter not in SWEEPABLE:
            raise InvalidParamsError(
                f"parameter: {self.parameter!r} not one of {SWEEPABLE}"
            )
        if not self.seeds:
            raise InvalidParamsError("seeds: at least one (label, state) required")


@dataclass
class BranchPoint:
    value: float
    record: AttractorRecord
    event: str = ""


@dataclass
class Branch:
    """One continuation arm: records at strictly monotone parameter values."""

    label: str
    arm: str  # "up" or "down"
    points: list[BranchPoint]
    termination: str  # "range-end" or "breakdown"

    @property
    def values(self) -> list[float]:
        return [pt.value for pt in self.points]


def _arm_values(sc: SweepConfig, direction: int) -> list[float]:
    vals = []
    k = 1
    tol = 1e-9 * sc.step
    while True:
        v = sc.start + direction * k * sc.step
        if v > sc.hi + tol or v < sc.lo - tol:
            break
        vals.append(min(max(v, sc.lo), sc.hi))
        k += 1
    return vals


def _continue_arm(
    sc: SweepConfig,
    p: PhysicalParams,
    label: str,
    direction: int,
    start_record: AttractorRecord,
) -> Branch:
    arm = "up" if direction > 0 else "down"
    points = [BranchPoint(value=sc.start, record=start_record)]
    termination = "range-end"
    prev = start_record
    state = start_record.final_state
    for v in _arm_values(sc, direction):
        pv = _with_param(p, sc.parameter, v)
        sv = derive_scales(pv)
        rec = analyze(state, pv, sv, sc.analysis)
        if rec.failed:
            points.append(BranchPoint(value=v, record=rec, event="breakdown"))
            termination = "breakdown"
            break
        event = ""
        if not rec.spectrum.converged:
            event = "unconverged"
        elif (
            prev.attractor_class is not None
            and rec.attractor_class != prev.attractor_class
            and prev.poincare is not None
            and hausdorff(rec.poincare, prev.poincare) > sc.jump_threshold
        ):
            event = "jump"
        points.append(BranchPoint(value=v, record=rec, event=event))
        prev = rec
        state = rec.final_state
    return Branch(label=label, arm=arm, points=points, termination=termination)


def sweep(sc: SweepConfig, p: PhysicalParams, s: DerivedScales | None = None) -> list[Branch]:
    """Continue every seed from the start value in both directions.

    The record at the start value is computed once per seed and shared by
    both arms; it must pass the convergence gate (the seed is supposed to
    already sit on an attractor there).
    """
    p_start = _with_param(p, sc.parameter, sc.start)
    s_start = derive_scales(p_start)

    def _seed_record(item):
        label, state = item
        rec = analyze(state, p_start, s_start, sc.analysis)
        if rec.failed:
            raise ModelBreakdownError(f"seed {label!r}: {rec.error}")
        if not rec.spectrum.converged:
            raise NotConvergedError(
                f"seed {label!r}: start-point spectrum not converged; "
                "extend the run lengths",
                spectrum=rec.spectrum,
            )
        return rec

    with ThreadPoolExecutor(max_workers=sc.threads) as pool:
        seed_records = list(pool.map(_seed_record, sc.seeds))
        jobs = []
        for (label, _), rec in zip(sc.seeds, seed_records):
            directions = [d for d in (1, -1) if _arm_values(sc, d)]
            if not directions:
                directions = [1]  # degenerate range: a single-point branch
            for direction in directions:
                jobs.append((label, direction, rec))
        branches = list(
            pool.map(lambda j: _continue_arm(sc, p, j[0], j[1], j[2]), jobs)
        )
    return branches


def merge_records(
    records: list[AttractorRecord],
    threshold: float = JUMP_THRESHOLD,
    check_swap: bool = False,
) -> list[AttractorRecord]:
    """Deduplicate records that describe the same attractor (optionally
    matching mirror images, which sets the counterpart flag)."""
    distinct: list[AttractorRecord] = []
    for rec in records:
        matched = False
        for i, rep in enumerate(distinct):
            same, via_swap = same_attractor(rep, rec, threshold, check_swap)
            if same:
                if via_swap and not rep.has_counterpart:
                    distinct[i] = replace(rep, has_counterpart=True)
                matched = True
                break
        if not matched:
            distinct.append(rec)
    return distinct


def find_coexisting(
    seeds: list[State],
    p: PhysicalParams,
    s: DerivedScales | None = None,
    cfg: AnalysisConfig | None = None,
    jump_threshold: float = JUMP_THRESHOLD,
    threads: int | None = None,
) -> list[AttractorRecord]:
    """Analyze every seed at one parameter point and merge duplicates.

    At the symmetric point a record matching the mirror image of another is
    folded into it with the counterpart flag set. Seed failures propagate.
    """
    if not seeds:
        raise InvalidParamsError("seeds: at least one state required")
    if s is None:
        s = derive_scales(p)
    cfg = cfg or AnalysisConfig()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        records = list(pool.map(lambda x0: analyze(x0, p, s, cfg), seeds))
    for i, rec in enumerate(records):
        if rec.failed:
            raise ModelBreakdownError(f"seed {i}: {rec.error}")
        if not rec.spectrum.converged:
            raise NotConvergedError(
                f"seed {i}: spectrum not converged", spectrum=rec.spectrum
            )
    return merge_records(records, jump_threshold, check_swap=(p.eps == 1.0))


@dataclass(frozen=True)
class ProbeBox:
    """Sampling box for random initial states (theta fixed at 0)."""

    r_lo: float = 0.5
    r_hi: float = 1.5
    u_lo: float = -0.5
    u_hi: float = 0.5

    def draw(self, rng: np.random.Generator) -> State:
        return State(
            r1=float(rng.uniform(self.r_lo, self.r_hi)),
            u1=float(rng.uniform(self.u_lo, self.u_hi)),
            r2=float(rng.uniform(self.r_lo, self.r_hi)),
            u2=float(rng.uniform(self.u_lo, self.u_hi)),
            theta=0.0,
        )


def monostability_probe(
    p: PhysicalParams,
    n_random: int,
    rng_seed: int,
    s: DerivedScales | None = None,
    cfg: AnalysisConfig | None = None,
    box: ProbeBox = ProbeBox(),
    jump_threshold: float = JUMP_THRESHOLD,
    threads: int | None = None,
) -> tuple[list[AttractorRecord], list[AttractorRecord]]:
    """Analyze n_random seeded-random initial states and merge the results.

    Returns (distinct attractor records, failed-or-unconverged records).
    A single distinct record is evidence, not proof, of monostability.
    """
    if n_random < 1:
        raise InvalidParamsError(f"n_random: must be >= 1, got {n_random!r}")
    if s is None:
        s = derive_scales(p)
    cfg = cfg or AnalysisConfig()
    rng = np.random.default_rng(rng_seed)
    states = [box.draw(rng) for _ in range(n_random)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        records = list(pool.map(lambda x0: analyze(x0, p, s, cfg), states))
    good = [r for r in records if not r.failed and r.spectrum.converged]
    bad = [r for r in records if r.failed or not r.spectrum.converged]
    return merge_records(good, jump_threshold, check_swap=(p.eps == 1.0)), bad


CLASS_CODES = {
    AttractorClass.PERIODIC: 0,
    AttractorClass.QUASIPERIODIC: 1,
    AttractorClass.CHAOTIC: 2,
    AttractorClass.HYPERCHAOTIC: 3,
}
CODE_NAMES = {0: "periodic", 1: "quasiperiodic", 2: "chaotic", 3: "hyperchaotic", -1: "failed"}


@dataclass(frozen=True)
class ChartConfig:
    """Two-parameter grid with a seed cell for the continuation order."""

    x_param: str
    x_lo: float
    x_hi: float
    nx: int
    y_param: str
    y_lo: float
    y_hi: float
    ny: int
    seed_x: float
    seed_y: float
    seed_state: State
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    threads: int | None = None

    def __post_init__(self):
        for name in ("x_param", "y_param"):
            if getattr(self, name) not in SWEEPABLE:
                raise InvalidParamsError(
                    f"{name}: {getattr(self, name)!r} not one of {SWEEPABLE}"
                )
        if self.x_param == self.y_param:
            raise InvalidParamsError("x_param and y_param must differ")
        if self.nx < 1 or self.ny < 1:
            raise InvalidParamsError("grid: nx and ny must be >= 1")
        if not (self.x_lo <= self.seed_x <= self.x_hi) or not (
            self.y_lo <= self.seed_y <= self.y_hi
        ):
            raise InvalidParamsError("seed: seed point must lie inside the grid")
        if self.nx > 1 and not self.x_lo < self.x_hi:
            raise InvalidParamsError("x range: need x_lo < x_hi")
        if self.ny > 1 and not self.y_lo < self.y_hi:
            raise InvalidParamsError("y range: need y_lo < y_hi")

    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.nx)

    def y_values(self) -> np.ndarray:
        return np.linspace(self.y_lo, self.y_hi, self.ny)


@dataclass
class ChartGrid:
    """Dense result grid: effective exponents, class code, convergence flag
    and the inherited seed state of every cell."""

    x_param: str
    y_param: str
    x_values: np.ndarray
    y_values: np.ndarray
    eff1: np.ndarray  # (ny, nx)
    eff2: np.ndarray
    class_code: np.ndarray  # int8; -1 marks failed cells
    converged: np.ndarray  # bool
    seed_states: np.ndarray  # (ny, nx, 5)
    errors: dict[tuple[int, int], str]

    def class_name(self, ix: int, iy: int) -> str:
        return CODE_NAMES[int(self.class_code[iy, ix])]


def _analyze_cell(cc: ChartConfig, p, x_val, y_val, state):
    pv = _with_param(_with_param(p, cc.x_param, x_val), cc.y_param, y_val)
    sv = derive_scales(pv)
    return analyze(state, pv, sv, cc.analysis)


def _store(grid: ChartGrid, ix: int, iy: int, rec: AttractorRecord, seed_state: State):
    grid.seed_states[iy, ix] = seed_state.to_array()
    if rec.failed:
        grid.eff1[iy, ix] = np.nan
        grid.eff2[iy, ix] = np.nan
        grid.class_code[iy, ix] = -1
        grid.converged[iy, ix] = False
        grid.errors[(ix, iy)] = rec.error
    else:
        grid.eff1[iy, ix] = rec.spectrum.effective[0]
        grid.eff2[iy, ix] = rec.spectrum.effective[1]
        grid.class_code[iy, ix] = CLASS_CODES[rec.attractor_class]
        grid.converged[iy, ix] = rec.spectrum.converged


def chart(cc: ChartConfig, p: PhysicalParams, s: DerivedScales | None = None) -> ChartGrid:
    """Compute the two-parameter chart with the seed-column-then-rows order.

    The seed cell is analyzed first; the seed column is continued up and
    down from it; each row then continues left and right from its column
    cell's final state. Rows run in parallel; every cell ends up with
    either a result or an explicit failure marker. Failed cells pass the
    last good state through so the walk can keep going.
    """
    xs = cc.x_values()
    ys = cc.y_values()
    grid = ChartGrid(
        x_param=cc.x_param,
        y_param=cc.y_param,
        x_values=xs,
        y_values=ys,
        eff1=np.full((cc.ny, cc.nx), np.nan),
        eff2=np.full((cc.ny, cc.nx), np.nan),
        class_code=np.full((cc.ny, cc.nx), -1, dtype=np.int8),
        converged=np.zeros((cc.ny, cc.nx), dtype=bool),
        seed_states=np.full((cc.ny, cc.nx, 5), np.nan),
        errors={},
    )
    ix0 = int(np.argmin(np.abs(xs - cc.seed_x)))
    iy0 = int(np.argmin(np.abs(ys - cc.seed_y)))
    row_start: list[State | None] = [None] * cc.ny

    def _cell(ix: int, iy: int, state: State) -> State:
        rec = _analyze_cell(cc, p, float(xs[ix]), float(ys[iy]), state)
        _store(grid, ix, iy, rec, state)
        if not rec.failed and rec.final_state is not None:
            return rec.final_state
        return state

    # seed cell, then the seed column both ways, remembering what each
    # column cell hands to its row
    row_start[iy0] = _cell(ix0, iy0, cc.seed_state)
    state = row_start[iy0]
    for iy in range(iy0 + 1, cc.ny):
        state = _cell(ix0, iy, state)
        row_start[iy] = state
    state = row_start[iy0]
    for iy in range(iy0 - 1, -1, -1):
        state = _cell(ix0, iy, state)
        row_start[iy] = state

    def _row(iy: int):
        state = row_start[iy]
        for ix in range(ix0 + 1, cc.nx):
            state = _cell(ix, iy, state)
        state = row_start[iy]
        for ix in range(ix0 - 1, -1, -1):
            state = _cell(ix, iy, state)

    with ThreadPoolExecutor(max_workers=cc.threads) as pool:
        list(pool.map(_row, range(cc.ny)))
    return grid
