"""Sweeps, attractor merging, charts and probes."""

import numpy as np
import pytest

from bubblepair import (
    AttractorClass,
    ChartConfig,
    InvalidParamsError,
    PoincareSet,
    State,
    SweepConfig,
    Synchrony,
    analyze,
    chart,
    find_coexisting,
    hausdorff,
    monostability_probe,
    sweep,
)
from bubblepair.chaos import AttractorRecord, ParamPoint
from bubblepair.continuation import ProbeBox, merge_records, same_attractor

from conftest import fast_cfg, fig1_params


def _fake_record(samples, cls=AttractorClass.PERIODIC):
    return AttractorRecord(
        point=ParamPoint(1.2e6, 21.0, 1.0),
        initial_state=None,
        spectrum=None,
        attractor_class=cls,
        synchrony=Synchrony.NOT_APPLICABLE,
        poincare=PoincareSet(np.asarray(samples, dtype=float), 0.0, 0),
        period=None,
        final_state=None,
    )


# ----------------------------------------------------------- merge logic


def test_same_attractor_direct_match():
    a = _fake_record([[1.0, 0.0, 1.0, 0.0]])
    b = _fake_record([[1.01, 0.0, 1.0, 0.0]])
    assert same_attractor(a, b, threshold=0.05) == (True, False)


def test_same_attractor_class_mismatch():
    a = _fake_record([[1.0, 0.0, 1.0, 0.0]])
    b = _fake_record([[1.0, 0.0, 1.0, 0.0]], cls=AttractorClass.CHAOTIC)
    assert same_attractor(a, b, threshold=0.05) == (False, False)


def test_same_attractor_distance_mismatch():
    a = _fake_record([[1.0, 0.0, 1.0, 0.0]])
    b = _fake_record([[1.5, 0.0, 1.0, 0.0]])
    assert same_attractor(a, b, threshold=0.05) == (False, False)


def test_same_attractor_via_swap_sets_counterpart():
    a = _fake_record([[1.2, 0.1, 0.8, -0.1]])
    b = _fake_record([[0.8, -0.1, 1.2, 0.1]])
    same, via_swap = same_attractor(a, b, threshold=0.05, check_swap=True)
    assert same and via_swap
    merged = merge_records([a, b], threshold=0.05, check_swap=True)
    assert len(merged) == 1
    assert merged[0].has_counterpart


def test_merge_self_symmetric_pair_no_counterpart_flag():
    a = _fake_record([[1.2, 0.1, 0.8, -0.1], [0.8, -0.1, 1.2, 0.1]])
    b = _fake_record([[0.8, -0.1, 1.2, 0.1], [1.2, 0.1, 0.8, -0.1]])
    merged = merge_records([a, b], threshold=0.05, check_swap=True)
    assert len(merged) == 1
    assert not merged[0].has_counterpart


def test_hausdorff_is_symmetric_metric():
    a = PoincareSet(np.array([[0.0, 0.0, 0.0, 0.0]]), 0.0, 0)
    b = PoincareSet(np.array([[1.0, 0.0, 0.0, 0.0]]), 0.0, 0)
    assert hausdorff(a, b) == hausdorff(b, a) == pytest.approx(1.0)


# ---------------------------------------------------------------- sweeps


def test_sweep_config_validation():
    seed = (("s", State(1.0, 0.0, 1.0, 0.0)),)
    with pytest.raises(InvalidParamsError):
        SweepConfig(lo=1.1, hi=1.0, step=0.1, seeds=seed)
    with pytest.raises(InvalidParamsError):
        SweepConfig(lo=0.9, hi=1.1, step=-0.1, seeds=seed)
    with pytest.raises(InvalidParamsError):
        SweepConfig(lo=0.9, hi=1.1, step=0.1, start=2.0, seeds=seed)
    with pytest.raises(InvalidParamsError):
        SweepConfig(lo=0.9, hi=1.1, step=0.1, parameter="sigma", seeds=seed)
    with pytest.raises(InvalidParamsError):
        SweepConfig(lo=0.9, hi=1.1, step=0.1)


def test_degenerate_sweep_equals_analyze():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=600, measure_periods=2000, conv_tol=1e-3)
    x0 = State(1.0, 0.0, 1.0, 0.0)
    sc = SweepConfig(lo=1.0, hi=1.0, step=0.01, start=1.0,
                     seeds=(("cycle", x0),), analysis=cfg, threads=2)
    branches = sweep(sc, p)
    assert len(branches) == 1
    assert len(branches[0].points) == 1
    direct = analyze(x0, p, cfg=cfg)
    got = branches[0].points[0].record
    assert got.spectrum.exponents == direct.spectrum.exponents
    assert got.attractor_class is direct.attractor_class


def test_sweep_two_arms_monotone_and_deterministic():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=500, measure_periods=1500, conv_tol=2e-3)
    sc = SweepConfig(lo=0.998, hi=1.002, step=1e-3, start=1.0,
                     seeds=(("cycle", State(1.0, 0.0, 1.0, 0.0)),),
                     analysis=cfg, threads=2)
    b1 = sweep(sc, p)
    assert sorted(b.arm for b in b1) == ["down", "up"]
    for br in b1:
        vals = br.values
        assert vals[0] == 1.0
        diffs = np.diff(vals)
        assert np.all(diffs > 0) if br.arm == "up" else np.all(diffs < 0)
        assert br.termination == "range-end"
    b2 = sweep(sc, p)
    for x, y in zip(b1, b2):
        for px, py in zip(x.points, y.points):
            assert px.record.spectrum.exponents == py.record.spectrum.exponents
            assert px.record.final_state == py.record.final_state


# ----------------------------------------------------------- coexistence


def test_find_coexisting_merges_same_cycle_and_counterparts():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=600, measure_periods=2000, conv_tol=1e-3)
    x0 = State(1.0, 0.0, 1.0, 0.0)
    asym = State(0.8, 0.3, 1.2, -0.2)
    recs = find_coexisting([x0, State(1.05, 0.02, 1.05, 0.02), asym, swap_state(asym)],
                           p, cfg=cfg, threads=2)
    classes = sorted(r.synchrony.value for r in recs)
    assert len(recs) == 2  # the synchronous cycle + the asynchronous one
    assert classes == ["async", "sync"]
    assert all(r.period == 4 for r in recs)


def swap_state(x: State) -> State:
    return State(x.r2, x.u2, x.r1, x.u1, x.theta)


def test_find_coexisting_requires_seeds():
    with pytest.raises(InvalidParamsError):
        find_coexisting([], fig1_params())


# ---------------------------------------------------------------- probes


def test_probe_deterministic_and_single_attractor():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=500, measure_periods=1500, conv_tol=2e-3)
    recs1, bad1 = monostability_probe(p, 4, rng_seed=11, cfg=cfg, threads=2)
    recs2, bad2 = monostability_probe(p, 4, rng_seed=11, cfg=cfg, threads=2)
    assert len(recs1) == len(recs2)
    for a, b in zip(recs1, recs2):
        assert a.spectrum.exponents == b.spectrum.exponents
        assert a.initial_state == b.initial_state
    recs3, _ = monostability_probe(p, 4, rng_seed=12, cfg=cfg, threads=2)
    assert {r.attractor_class for r in recs3} <= {AttractorClass.PERIODIC}


def test_probe_single_sample_equals_analyze():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=500, measure_periods=1500, conv_tol=2e-3)
    box = ProbeBox()
    rng = np.random.default_rng(77)
    expected_state = box.draw(rng)
    recs, bad = monostability_probe(p, 1, rng_seed=77, cfg=cfg, box=box)
    assert len(recs) + len(bad) == 1
    direct = analyze(expected_state, p, cfg=cfg)
    got = (recs + bad)[0]
    assert got.spectrum.exponents == direct.spectrum.exponents


def test_probe_validation():
    with pytest.raises(InvalidParamsError):
        monostability_probe(fig1_params(), 0, rng_seed=1)


# ---------------------------------------------------------------- charts


def chart_cfg(**kw):
    base = dict(
        x_param="d_ratio", x_lo=13.0, x_hi=13.0, nx=1,
        y_param="pac", y_lo=1.2e6, y_hi=1.2e6, ny=1,
        seed_x=13.0, seed_y=1.2e6,
        seed_state=State(1.0, 0.0, 1.0, 0.0),
        analysis=fast_cfg(transient_periods=500, measure_periods=1500, conv_tol=2e-3),
        threads=2,
    )
    base.update(kw)
    return ChartConfig(**base)


def test_chart_config_validation():
    with pytest.raises(InvalidParamsError):
        chart_cfg(x_param="pac")  # same as y axis
    with pytest.raises(InvalidParamsError):
        chart_cfg(nx=0)
    with pytest.raises(InvalidParamsError):
        chart_cfg(seed_x=99.0)


def test_chart_1x1_matches_analyze():
    cc = chart_cfg()
    p = fig1_params()
    grid = chart(cc, p)
    direct = analyze(cc.seed_state, fig1_params(d_ratio=13.0, p_ac=1.2e6), cfg=cc.analysis)
    assert grid.class_name(0, 0) == direct.attractor_class.value
    assert grid.eff1[0, 0] == direct.spectrum.effective[0]
    assert grid.eff2[0, 0] == direct.spectrum.effective[1]
    assert grid.converged[0, 0] == direct.spectrum.converged


def test_chart_grid_totality_and_consistency():
    cc = chart_cfg(
        x_lo=12.9, x_hi=13.1, nx=3, y_lo=1.15e6, y_hi=1.25e6, ny=3,
        seed_x=13.0, seed_y=1.2e6,
    )
    p = fig1_params()
    grid = chart(cc, p)
    assert grid.class_code.shape == (3, 3)
    assert np.all(np.isfinite(grid.seed_states))  # every cell has a seed state
    assert np.all((grid.class_code >= -1) & (grid.class_code <= 3))
    ok = grid.class_code >= 0
    assert np.all(np.isfinite(grid.eff1[ok]))
    # re-running a cell from its stored inherited state reproduces the class
    iy, ix = 2, 0
    pv = fig1_params(d_ratio=float(grid.x_values[ix]), p_ac=float(grid.y_values[iy]))
    redo = analyze(State.from_array(grid.seed_states[iy, ix]), pv, cfg=cc.analysis)
    assert redo.attractor_class.value == grid.class_name(ix, iy)
