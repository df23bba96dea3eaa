"""Run configuration, CSV serialization and run manifests.

Config files are JSON with optional blocks; anything omitted falls back to
the shipped defaults. Outputs are UTF-8 CSVs with LF line endings, a
mandatory header row and floats printed with 17 significant digits, so a
re-run reproduces them byte for byte.
"""

from __future__ import annotations

import json
import os
import platform
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .chaos import AnalysisConfig, AttractorRecord, PoincareSet, Synchrony
from .continuation import (
    JUMP_THRESHOLD,
    Branch,
    ChartGrid,
    ProbeBox,
)
from .errors import InvalidParamsError
from .integrator import IntegratorConfig
from .model import State
from .params import DEFAULT_D_RATIO, PhysicalParams

TOOL_VERSION = "0.1.0"

_PHYSICAL_KEYS = {
    "p_stat", "p_v", "sigma", "rho", "eta_l", "c", "gamma", "chi",
    "kappa_s", "r10", "eps", "d", "d_ratio", "p_ac", "omega",
}
_INTEGRATOR_KEYS = {"rtol", "atol", "h0", "h_max", "safety"}
_ANALYSIS_KEYS = {
    "lambda_tr", "delta_sync", "transient_periods", "measure_periods",
    "conv_tol", "poincare_collect", "period_tol", "h_rel",
    "max_extensions", "jump_threshold",
}
_TOP_KEYS = {
    "physical", "integrator", "analysis", "analyze", "poincare", "sweep",
    "chart", "probe", "out_dir", "rng_seed", "threads",
}


def _require(cond: bool, key: str, constraint: str):
    if not cond:
        raise InvalidParamsError(f"{key}: {constraint}")


def _check_keys(block: dict, allowed: set, prefix: str):
    for k in block:
        if k not in allowed:
            raise InvalidParamsError(
                f"{prefix}{k}: unknown key (allowed: {', '.join(sorted(allowed))})"
            )


def _state_from_list(values, key: str) -> State:
    _require(
        isinstance(values, (list, tuple)) and len(values) in (4, 5),
        key,
        "state must be a list [r1, u1, r2, u2] or [r1, u1, r2, u2, theta]",
    )
    vals = [float(v) for v in values]
    if len(vals) == 4:
        vals.append(0.0)
    try:
        return State(*vals)
    except Exception as exc:
        raise InvalidParamsError(f"{key}: {exc}") from exc


@dataclass
class AnalyzeJob:
    state: State


@dataclass
class PoincareJob:
    state: State
    skip: int = 1000
    collect: int = 1000


@dataclass
class SweepJob:
    lo: float
    hi: float
    step: float
    start: float = 1.0
    parameter: str = "eps"
    seeds: tuple[tuple[str, State], ...] = ()


@dataclass
class ChartJob:
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


@dataclass
class ProbeJob:
    n_random: int = 20
    box: ProbeBox = field(default_factory=ProbeBox)


@dataclass
class RunConfig:
    """Fully resolved configuration of one run."""

    physical: PhysicalParams = field(default_factory=PhysicalParams)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    jump_threshold: float = JUMP_THRESHOLD
    analyze: AnalyzeJob | None = None
    poincare: PoincareJob | None = None
    sweep: SweepJob | None = None
    chart: ChartJob | None = None
    probe: ProbeJob | None = None
    out_dir: str = "out"
    rng_seed: int = 20210901
    threads: int | None = None


def config_from_dict(raw: dict) -> RunConfig:
    """Validate a JSON-shaped dict and fill defaults."""
    if not isinstance(raw, dict):
        raise InvalidParamsError("config: top level must be a JSON object")
    _check_keys(raw, _TOP_KEYS, "")

    phys_block = dict(raw.get("physical", {}))
    _check_keys(phys_block, _PHYSICAL_KEYS, "physical.")
    if "d" in phys_block and "d_ratio" in phys_block:
        raise InvalidParamsError("physical.d: give either d or d_ratio, not both")
    d_ratio = phys_block.pop("d_ratio", None)
    try:
        physical = PhysicalParams(**{k: float(v) for k, v in phys_block.items()})
        if d_ratio is not None:
            physical = physical.with_drive(d_ratio=float(d_ratio))
    except InvalidParamsError as exc:
        raise InvalidParamsError(f"physical.{exc}") from exc

    integ_block = dict(raw.get("integrator", {}))
    _check_keys(integ_block, _INTEGRATOR_KEYS, "integrator.")
    try:
        integrator = IntegratorConfig(**{k: float(v) for k, v in integ_block.items()})
    except InvalidParamsError as exc:
        raise InvalidParamsError(f"integrator.{exc}") from exc

    ana_block = dict(raw.get("analysis", {}))
    _check_keys(ana_block, _ANALYSIS_KEYS, "analysis.")
    jump_threshold = float(ana_block.pop("jump_threshold", JUMP_THRESHOLD))
    _require(jump_threshold > 0.0, "analysis.jump_threshold", "must be positive")
    int_fields = {"transient_periods", "measure_periods", "poincare_collect", "max_extensions"}
    kwargs = {
        k: (int(v) if k in int_fields else float(v)) for k, v in ana_block.items()
    }
    try:
        analysis = AnalysisConfig(integrator=integrator, **kwargs)
    except ValueError as exc:
        raise InvalidParamsError(f"analysis.{exc}") from exc

    cfg = RunConfig(
        physical=physical,
        integrator=integrator,
        analysis=analysis,
        jump_threshold=jump_threshold,
    )

    if "analyze" in raw:
        block = dict(raw["analyze"])
        _check_keys(block, {"state"}, "analyze.")
        _require("state" in block, "analyze.state", "required")
        cfg.analyze = AnalyzeJob(state=_state_from_list(block["state"], "analyze.state"))

    if "poincare" in raw:
        block = dict(raw["poincare"])
        _check_keys(block, {"state", "skip", "collect"}, "poincare.")
        _require("state" in block, "poincare.state", "required")
        job = PoincareJob(
            state=_state_from_list(block["state"], "poincare.state"),
            skip=int(block.get("skip", 1000)),
            collect=int(block.get("collect", 1000)),
        )
        _require(job.skip >= 0, "poincare.skip", "must be >= 0")
        _require(job.collect > 0, "poincare.collect", "must be > 0")
        cfg.poincare = job

    if "sweep" in raw:
        block = dict(raw["sweep"])
        _check_keys(block, {"lo", "hi", "step", "start", "parameter", "seeds"}, "sweep.")
        for need in ("lo", "hi", "step"):
            _require(need in block, f"sweep.{need}", "required")
        seeds = []
        for i, entry in enumerate(block.get("seeds", [])):
            _require(
                isinstance(entry, dict) and "state" in entry,
                f"sweep.seeds[{i}]",
                'must be {"label": ..., "state": [...]}',
            )
            seeds.append(
                (
                    str(entry.get("label", f"seed{i}")),
                    _state_from_list(entry["state"], f"sweep.seeds[{i}].state"),
                )
            )
        cfg.sweep = SweepJob(
            lo=float(block["lo"]),
            hi=float(block["hi"]),
            step=float(block["step"]),
            start=float(block.get("start", 1.0)),
            parameter=str(block.get("parameter", "eps")),
            seeds=tuple(seeds),
        )

    if "chart" in raw:
        block = dict(raw["chart"])
        _check_keys(block, {"x", "y", "seed"}, "chart.")
        for need in ("x", "y", "seed"):
            _require(need in block, f"chart.{need}", "required")

        def _axis(ax: dict, name: str):
            _check_keys(ax, {"param", "lo", "hi", "n"}, f"chart.{name}.")
            for need in ("param", "lo", "hi", "n"):
                _require(need in ax, f"chart.{name}.{need}", "required")
            return str(ax["param"]), float(ax["lo"]), float(ax["hi"]), int(ax["n"])

        xp, xlo, xhi, nx = _axis(dict(block["x"]), "x")
        yp, ylo, yhi, ny = _axis(dict(block["y"]), "y")
        seed = dict(block["seed"])
        _check_keys(seed, {"x", "y", "state"}, "chart.seed.")
        for need in ("x", "y", "state"):
            _require(need in seed, f"chart.seed.{need}", "required")
        cfg.chart = ChartJob(
            x_param=xp, x_lo=xlo, x_hi=xhi, nx=nx,
            y_param=yp, y_lo=ylo, y_hi=yhi, ny=ny,
            seed_x=float(seed["x"]),
            seed_y=float(seed["y"]),
            seed_state=_state_from_list(seed["state"], "chart.seed.state"),
        )

    if "probe" in raw:
        block = dict(raw["probe"])
        _check_keys(block, {"n_random", "box"}, "probe.")
        box = ProbeBox()
        if "box" in block:
            bx = dict(block["box"])
            _check_keys(bx, {"r_lo", "r_hi", "u_lo", "u_hi"}, "probe.box.")
            box = ProbeBox(
                r_lo=float(bx.get("r_lo", box.r_lo)),
                r_hi=float(bx.get("r_hi", box.r_hi)),
                u_lo=float(bx.get("u_lo", box.u_lo)),
                u_hi=float(bx.get("u_hi", box.u_hi)),
            )
            _require(box.r_lo < box.r_hi and box.r_lo > 0, "probe.box", "need 0 < r_lo < r_hi")
            _require(box.u_lo < box.u_hi, "probe.box", "need u_lo < u_hi")
        n_random = int(block.get("n_random", 20))
        _require(n_random >= 1, "probe.n_random", "must be >= 1")
        cfg.probe = ProbeJob(n_random=n_random, box=box)

    if "out_dir" in raw:
        cfg.out_dir = str(raw["out_dir"])
    if "rng_seed" in raw:
        cfg.rng_seed = int(raw["rng_seed"])
    if "threads" in raw and raw["threads"] is not None:
        cfg.threads = int(raw["threads"])
        _require(cfg.threads >= 1, "threads", "must be >= 1")
    return cfg


def parse_config(path: str) -> RunConfig:
    """Load and validate a JSON config file, filling all defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParamsError(f"config: not valid JSON ({exc})") from exc
    return config_from_dict(raw)


def _state_list(x: State) -> list[float]:
    return [x.r1, x.u1, x.r2, x.u2, x.theta]


def config_to_dict(cfg: RunConfig) -> dict:
    """The resolved config as a JSON-shaped dict; parsing it back yields an
    equal RunConfig."""
    out: dict = {
        "physical": {
            f.name: getattr(cfg.physical, f.name) for f in fields(PhysicalParams)
        },
        "integrator": {
            f.name: getattr(cfg.integrator, f.name) for f in fields(IntegratorConfig)
        },
        "analysis": {
            "lambda_tr": cfg.analysis.lambda_tr,
            "delta_sync": cfg.analysis.delta_sync,
            "transient_periods": cfg.analysis.transient_periods,
            "measure_periods": cfg.analysis.measure_periods,
            "conv_tol": cfg.analysis.conv_tol,
            "poincare_collect": cfg.analysis.poincare_collect,
            "period_tol": cfg.analysis.period_tol,
            "h_rel": cfg.analysis.h_rel,
            "max_extensions": cfg.analysis.max_extensions,
            "jump_threshold": cfg.jump_threshold,
        },
        "out_dir": cfg.out_dir,
        "rng_seed": cfg.rng_seed,
        "threads": cfg.threads,
    }
    if cfg.analyze is not None:
        out["analyze"] = {"state": _state_list(cfg.analyze.state)}
    if cfg.poincare is not None:
        out["poincare"] = {
            "state": _state_list(cfg.poincare.state),
            "skip": cfg.poincare.skip,
            "collect": cfg.poincare.collect,
        }
    if cfg.sweep is not None:
        out["sweep"] = {
            "lo": cfg.sweep.lo,
            "hi": cfg.sweep.hi,
            "step": cfg.sweep.step,
            "start": cfg.sweep.start,
            "parameter": cfg.sweep.parameter,
            "seeds": [
                {"label": label, "state": _state_list(st)}
                for label, st in cfg.sweep.seeds
            ],
        }
    if cfg.chart is not None:
        out["chart"] = {
            "x": {
                "param": cfg.chart.x_param,
                "lo": cfg.chart.x_lo,
                "hi": cfg.chart.x_hi,
                "n": cfg.chart.nx,
            },
            "y": {
                "param": cfg.chart.y_param,
                "lo": cfg.chart.y_lo,
                "hi": cfg.chart.y_hi,
                "n": cfg.chart.ny,
            },
            "seed": {
                "x": cfg.chart.seed_x,
                "y": cfg.chart.seed_y,
                "state": _state_list(cfg.chart.seed_state),
            },
        }
    if cfg.probe is not None:
        out["probe"] = {
            "n_random": cfg.probe.n_random,
            "box": asdict(cfg.probe.box),
        }
    return out


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _write_csv(path: str, header: list[str], rows) -> str:
    """Write one CSV; on any failure remove the partial file and re-raise."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except BaseException:
        if os.path.exists(path):
            os.remove(path)
        raise
    return path


def write_poincare_csv(ps: PoincareSet, path: str) -> str:
    rows = (
        (k + 1, smp[0], smp[1], smp[2], smp[3]) for k, smp in enumerate(ps.samples)
    )
    return _write_csv(path, ["k", "r1", "u1", "r2", "u2"], rows)


def _sweep_rows(branches: list[Branch]):
    for br in branches:
        for pt in br.points:
            rec = pt.record
            if rec.failed or rec.spectrum is None:
                lams = [float("nan")] * 5
                eff = (float("nan"), float("nan"))
                cls = "failed"
            else:
                lams = list(rec.spectrum.exponents)
                eff = rec.spectrum.effective
                cls = rec.attractor_class.value
            yield (
                br.label,
                br.arm,
                pt.value,
                *lams,
                eff[0],
                eff[1],
                cls,
                rec.synchrony.value,
                "" if rec.period is None else rec.period,
                pt.event,
            )


SWEEP_HEADER = [
    "branch", "arm", "eps",
    "lambda1", "lambda2", "lambda3", "lambda4", "lambda5",
    "eff_l1", "eff_l2", "class", "sync", "period", "event",
]


def write_sweep_csv(branches: list[Branch], path: str) -> str:
    return _write_csv(path, SWEEP_HEADER, _sweep_rows(branches))


CHART_HEADER = ["ix", "iy", "x_value", "y_value", "eff_l1", "eff_l2", "class", "converged"]


def write_chart_csv(grid: ChartGrid, path: str) -> str:
    def rows():
        for iy in range(len(grid.y_values)):
            for ix in range(len(grid.x_values)):
                yield (
                    ix,
                    iy,
                    grid.x_values[ix],
                    grid.y_values[iy],
                    grid.eff1[iy, ix],
                    grid.eff2[iy, ix],
                    grid.class_name(ix, iy),
                    "true" if grid.converged[iy, ix] else "false",
                )

    return _write_csv(path, CHART_HEADER, rows())


def record_to_dict(rec: AttractorRecord) -> dict:
    """JSON-shaped summary of one attractor record."""
    out = {
        "point": {"p_ac": rec.point.p_ac, "d_ratio": rec.point.d_ratio, "eps": rec.point.eps},
        "class": rec.attractor_class.value if rec.attractor_class else "failed",
        "sync": rec.synchrony.value,
        "period": rec.period,
        "has_counterpart": rec.has_counterpart,
        "error": rec.error,
    }
    if rec.spectrum is not None:
        out["exponents"] = list(rec.spectrum.exponents)
        out["effective"] = list(rec.spectrum.effective)
        out["converged"] = rec.spectrum.converged
        out["divergence_rate"] = rec.spectrum.divergence_rate
    if rec.initial_state is not None:
        out["initial_state"] = _state_list(rec.initial_state)
    if rec.final_state is not None:
        out["final_state"] = _state_list(rec.final_state)
    return out


def write_records_json(records: list[AttractorRecord], path: str) -> str:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump([record_to_dict(r) for r in records], fh, indent=2)
            fh.write("\n")
    except BaseException:
        if os.path.exists(path):
            os.remove(path)
        raise
    return path


@dataclass
class RunManifest:
    """Everything needed to reproduce one run exactly."""

    config: dict
    tool_version: str = TOOL_VERSION
    platform_note: str = ""
    wall_clock_s: float = 0.0
    jobs: list[dict] = field(default_factory=list)

    @classmethod
    def start(cls, cfg: RunConfig) -> "RunManifest":
        return cls(
            config=config_to_dict(cfg),
            platform_note=f"{platform.platform()} / Python {platform.python_version()}",
        )


def write_manifest(man: RunManifest, path: str) -> str:
    """Atomic write: the manifest appears complete or not at all."""
    tmp = path + ".tmp"
    payload = {
        "config": man.config,
        "tool_version": man.tool_version,
        "platform_note": man.platform_note,
        "wall_clock_s": man.wall_clock_s,
        "jobs": man.jobs,
    }
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)
    return path
