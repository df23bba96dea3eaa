"""Command-line front end.

Every figure-style run is one subcommand: analyze, poincare, sweep-eps,
chart, probe. Flags override config-file values, which override the
shipped defaults. Exit codes: 0 success, 2 validation error, 3 numerical
breakdown.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .chaos import analyze as analyze_op
from .chaos import poincare as poincare_op
from .continuation import (
    ChartConfig,
    SweepConfig,
    chart as chart_op,
    monostability_probe,
    sweep as sweep_op,
)
from .errors import BubblePairError, InvalidParamsError, NotConvergedError
from .model import State
from .params import derive_scales
from .runio import (
    RunConfig,
    RunManifest,
    config_from_dict,
    record_to_dict,
    write_chart_csv,
    write_manifest,
    write_poincare_csv,
    write_records_json,
    write_sweep_csv,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _parse_state_flag(text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) not in (4, 5):
        raise InvalidParamsError(
            f"--state: expected r1,u1,r2,u2[,theta], got {text!r}"
        )
    try:
        return [float(v) for v in parts]
    except ValueError as exc:
        raise InvalidParamsError(f"--state: {exc}") from exc


def _parse_axis_flag(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 4:
        raise InvalidParamsError(f"--x/--y: expected param:lo:hi:n, got {text!r}")
    try:
        return {
            "param": parts[0],
            "lo": float(parts[1]),
            "hi": float(parts[2]),
            "n": int(parts[3]),
        }
    except ValueError as exc:
        raise InvalidParamsError(f"--x/--y: {exc}") from exc


def _load_state_file(path: str) -> list[float]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict) and "state" in raw:
        raw = raw["state"]
    if not isinstance(raw, list):
        raise InvalidParamsError(f"{path}: expected a state list or {{'state': [...]}}")
    return [float(v) for v in raw]


def _parse_seed_flag(text: str) -> dict:
    parts = text.split(",")
    if len(parts) != 3:
        raise InvalidParamsError(f"--seed: expected x,y,state.json, got {text!r}")
    return {
        "x": float(parts[0]),
        "y": float(parts[1]),
        "state": _load_state_file(parts[2]),
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bubblepair",
        description="Coupled-microbubble attractor analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file (or a run manifest)")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--threads", type=int)
        sp.add_argument("--rng-seed", type=int, dest="rng_seed")
        sp.add_argument("--pac", type=float, help="drive amplitude, Pa")
        sp.add_argument("--d-ratio", type=float, dest="d_ratio", help="separation over r10")
        sp.add_argument("--eps", type=float, help="equilibrium radii ratio")
        sp.add_argument("--rtol", type=float)
        sp.add_argument("--atol", type=float)
        sp.add_argument("--transient", type=int, help="transient periods")
        sp.add_argument("--measure", type=int, help="measurement periods")

    sp = sub.add_parser("analyze", help="classify the attractor reached from one state")
    common(sp)
    sp.add_argument("--state", help="r1,u1,r2,u2[,theta]")

    sp = sub.add_parser("poincare", help="stroboscopic section from one state")
    common(sp)
    sp.add_argument("--state", help="r1,u1,r2,u2[,theta]")
    sp.add_argument("--skip", type=int)
    sp.add_argument("--collect", type=int)

    sp = sub.add_parser("sweep-eps", help="continue seeds over a parameter range")
    common(sp)
    sp.add_argument("--from", type=float, dest="lo")
    sp.add_argument("--to", type=float, dest="hi")
    sp.add_argument("--step", type=float)
    sp.add_argument("--start", type=float)
    sp.add_argument("--parameter", choices=("eps", "pac", "d_ratio"))
    sp.add_argument("--seeds", help="JSON file: [{label, state}, ...]")

    sp = sub.add_parser("chart", help="two-parameter chart of dynamical regimes")
    common(sp)
    sp.add_argument("--x", help="param:lo:hi:n, e.g. d_ratio:6:35:120")
    sp.add_argument("--y", help="param:lo:hi:n, e.g. pac:1.2e6:1.8e6:120")
    sp.add_argument("--seed", help="x,y,state.json")

    sp = sub.add_parser("probe", help="random-seed attractor probe at one point")
    common(sp)
    sp.add_argument("--n-random", type=int, dest="n_random")
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < flags"""
    raw: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidParamsError(f"config: not valid JSON ({exc})") from exc
        if isinstance(raw, dict) and "config" in raw and "tool_version" in raw:
            raw = raw["config"]  # a manifest was handed back in

    def block(name):
        return raw.setdefault(name, {})

    if getattr(args, "pac", None) is not None:
        block("physical")["p_ac"] = args.pac
    if getattr(args, "d_ratio", None) is not None:
        phys = block("physical")
        phys.pop("d", None)
        phys["d_ratio"] = args.d_ratio
    if getattr(args, "eps", None) is not None:
        block("physical")["eps"] = args.eps
    if getattr(args, "rtol", None) is not None:
        block("integrator")["rtol"] = args.rtol
    if getattr(args, "atol", None) is not None:
        block("integrator")["atol"] = args.atol
    if getattr(args, "transient", None) is not None:
        block("analysis")["transient_periods"] = args.transient
    if getattr(args, "measure", None) is not None:
        block("analysis")["measure_periods"] = args.measure
    if args.out is not None:
        raw["out_dir"] = args.out
    if getattr(args, "threads", None) is not None:
        raw["threads"] = args.threads
    if getattr(args, "rng_seed", None) is not None:
        raw["rng_seed"] = args.rng_seed

    cmd = args.command
    if cmd == "analyze" and getattr(args, "state", None):
        block("analyze")["state"] = _parse_state_flag(args.state)
    elif cmd == "poincare":
        if getattr(args, "state", None):
            block("poincare")["state"] = _parse_state_flag(args.state)
        if getattr(args, "skip", None) is not None:
            block("poincare")["skip"] = args.skip
        if getattr(args, "collect", None) is not None:
            block("poincare")["collect"] = args.collect
    elif cmd == "sweep-eps":
        for key in ("lo", "hi", "step", "start", "parameter"):
            v = getattr(args, key, None)
            if v is not None:
                block("sweep")[key] = v
        if getattr(args, "seeds", None):
            with open(args.seeds, "r", encoding="utf-8") as fh:
                block("sweep")["seeds"] = json.load(fh)
    elif cmd == "chart":
        if getattr(args, "x", None):
            block("chart")["x"] = _parse_axis_flag(args.x)
        if getattr(args, "y", None):
            block("chart")["y"] = _parse_axis_flag(args.y)
        if getattr(args, "seed", None):
            block("chart")["seed"] = _parse_seed_flag(args.seed)
    elif cmd == "probe":
        if getattr(args, "n_random", None) is not None:
            block("probe")["n_random"] = args.n_random

    # drop empty blocks the flag merge did not fill
    for name in ("physical", "integrator", "analysis", "analyze", "poincare",
                 "sweep", "chart", "probe"):
        if name in raw and raw[name] == {}:
            del raw[name]
    return config_from_dict(raw)


def _run(cfg: RunConfig, command: str, out_dir: str) -> list[dict]:
    p = cfg.physical
    s = derive_scales(p)
    acfg = cfg.analysis
    jobs = []
    if command == "analyze":
        if cfg.analyze is None:
            raise InvalidParamsError("analyze.state: required (use --state)")
        rec = analyze_op(cfg.analyze.state, p, s, acfg)
        write_records_json([rec], os.path.join(out_dir, "analyze.json"))
        if rec.poincare is not None:
            write_poincare_csv(rec.poincare, os.path.join(out_dir, "poincare.csv"))
        status = rec.error or ("ok" if rec.spectrum.converged else "unconverged")
        jobs.append({"name": "analyze", "status": status,
                     "class": record_to_dict(rec)["class"]})
        if rec.failed:
            raise BubblePairError(f"analyze: {rec.error}")
    elif command == "poincare":
        if cfg.poincare is None:
            raise InvalidParamsError("poincare.state: required (use --state)")
        ps = poincare_op(
            cfg.poincare.state, p, s, acfg.integrator,
            skip=cfg.poincare.skip, collect=cfg.poincare.collect,
        )
        write_poincare_csv(ps, os.path.join(out_dir, "poincare.csv"))
        jobs.append({"name": "poincare", "status": "ok", "samples": ps.count})
    elif command == "sweep-eps":
        if cfg.sweep is None:
            raise InvalidParamsError("sweep: block required (use --from/--to/--step/--seeds)")
        sc = SweepConfig(
            lo=cfg.sweep.lo, hi=cfg.sweep.hi, step=cfg.sweep.step,
            start=cfg.sweep.start, parameter=cfg.sweep.parameter,
            seeds=cfg.sweep.seeds, analysis=acfg,
            jump_threshold=cfg.jump_threshold, threads=cfg.threads,
        )
        branches = sweep_op(sc, p)
        write_sweep_csv(branches, os.path.join(out_dir, "sweep.csv"))
        for br in branches:
            jobs.append({"name": f"sweep:{br.label}:{br.arm}",
                         "status": br.termination, "points": len(br.points)})
    elif command == "chart":
        if cfg.chart is None:
            raise InvalidParamsError("chart: block required (use --x/--y/--seed)")
        cc = ChartConfig(
            x_param=cfg.chart.x_param, x_lo=cfg.chart.x_lo, x_hi=cfg.chart.x_hi,
            nx=cfg.chart.nx, y_param=cfg.chart.y_param, y_lo=cfg.chart.y_lo,
            y_hi=cfg.chart.y_hi, ny=cfg.chart.ny, seed_x=cfg.chart.seed_x,
            seed_y=cfg.chart.seed_y, seed_state=cfg.chart.seed_state,
            analysis=acfg, threads=cfg.threads,
        )
        grid = chart_op(cc, p)
        write_chart_csv(grid, os.path.join(out_dir, "chart.csv"))
        n_failed = int((grid.class_code < 0).sum())
        jobs.append({"name": "chart", "status": "ok", "failed_cells": n_failed})
    elif command == "probe":
        job = cfg.probe or None
        if job is None:
            from .runio import ProbeJob

            job = ProbeJob()
        records, failures = monostability_probe(
            p, job.n_random, cfg.rng_seed, s, acfg, box=job.box,
            jump_threshold=cfg.jump_threshold, threads=cfg.threads,
        )
        write_records_json(records, os.path.join(out_dir, "probe.json"))
        jobs.append({"name": "probe", "status": "ok",
                     "distinct": len(records), "failed_probes": len(failures)})
    else:
        raise InvalidParamsError(f"command: unknown {command!r}")
    return jobs


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
    except (InvalidParamsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    out_dir = cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest.start(cfg)
    t0 = time.perf_counter()
    try:
        manifest.jobs = _run(cfg, args.command, out_dir)
        code = EXIT_OK
    except InvalidParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.jobs = [{"name": args.command, "status": f"validation: {exc}"}]
        code = EXIT_VALIDATION
    except (BubblePairError, NotConvergedError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        manifest.jobs = [{"name": args.command, "status": f"failed: {exc}"}]
        code = EXIT_NUMERICAL
    manifest.wall_clock_s = time.perf_counter() - t0
    write_manifest(manifest, os.path.join(out_dir, "manifest.json"))
    return code


if __name__ == "__main__":
    sys.exit(main())
