"""Spectrum estimation, classification rule, sections, synchrony, analyze."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bubblepair import (
    AttractorClass,
    LyapunovSpectrum,
    NotConvergedError,
    PoincareSet,
    State,
    Synchrony,
    analyze,
    classify,
    detect_period,
    derive_scales,
    is_synchronous,
    lyapunov_spectrum,
    poincare,
    swap,
)
from bubblepair.chaos import apply_class_rule

from conftest import FAST_IC, fast_cfg, fig1_params


def _spectrum(eff1, eff2, converged=True):
    exps = sorted([eff1, eff2, 0.0, -0.3, -0.4], reverse=True)
    ref = int(np.argmin(np.abs(exps)))
    return LyapunovSpectrum(
        exponents=tuple(exps),
        referent_index=ref,
        effective=(eff1, eff2),
        converged=converged,
        transient_periods=100,
        measure_periods=1000,
        divergence_rate=sum(exps),
    )


# ------------------------------------------------------------ classification


@pytest.mark.parametrize(
    "eff, want",
    [
        ((-0.05, -0.2), AttractorClass.PERIODIC),
        ((0.0004, -0.03), AttractorClass.QUASIPERIODIC),
        ((0.02, 0.005), AttractorClass.HYPERCHAOTIC),
        ((0.02, -0.005), AttractorClass.CHAOTIC),
        # boundary ties: the quasiperiodic bucket is closed, lambda2 at the
        # threshold stays chaotic
        ((0.001, -0.5), AttractorClass.QUASIPERIODIC),
        ((-0.001, -0.5), AttractorClass.QUASIPERIODIC),
        ((0.02, 0.001), AttractorClass.CHAOTIC),
    ],
)
def test_classification_rule(eff, want):
    assert classify(_spectrum(*eff)) is want


def test_classify_refuses_unconverged():
    with pytest.raises(NotConvergedError):
        classify(_spectrum(0.02, -0.005, converged=False))


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-1.0, 1.0, allow_nan=False),
    st.floats(-1.0, 1.0, allow_nan=False),
)
def test_classification_total_and_disjoint(a, b):
    l1, l2 = max(a, b), min(a, b)
    got = apply_class_rule(l1, l2)
    matches = [
        l1 < -1e-3,
        -1e-3 <= l1 <= 1e-3,
        l1 > 1e-3 and l2 > 1e-3,
        l1 > 1e-3 and l2 <= 1e-3,
    ]
    assert sum(matches) == 1
    assert got in AttractorClass


# ------------------------------------------------------------- spectrum


def test_spectrum_at_damped_equilibrium(warm_kernels):
    p = fig1_params(p_ac=0.0)
    s = derive_scales(p)
    ls = lyapunov_spectrum(
        State(1.001, 0.0, 0.999, 0.0),
        p,
        s,
        FAST_IC,
        transient_periods=50,
        measure_periods=400,
        conv_tol=5e-4,
    )
    assert ls.converged
    assert ls.exponents == tuple(sorted(ls.exponents, reverse=True))
    assert abs(ls.referent) < 1e-3  # referent present and small
    assert ls.referent == 0.0  # phase direction is exactly neutral
    others = [v for i, v in enumerate(ls.exponents) if i != ls.referent_index]
    assert all(v < 0.0 for v in others)
    assert classify(ls) is AttractorClass.PERIODIC


# -------------------------------------------------------------- sections


def test_poincare_period_one_cycle():
    p = fig1_params(p_ac=2e4)  # weak drive: small forced oscillation
    s = derive_scales(p)
    ps = poincare(State(1.0, 0.0, 1.0, 0.0), p, s, FAST_IC, skip=300, collect=50)
    assert ps.count == 50
    center = ps.samples.mean(axis=0)
    assert np.max(np.linalg.norm(ps.samples - center, axis=1)) < 1e-6
    assert detect_period(ps) == 1


def test_poincare_validates_arguments():
    p = fig1_params()
    s = derive_scales(p)
    with pytest.raises(ValueError):
        poincare(State(1.0, 0.0, 1.0, 0.0), p, s, FAST_IC, skip=-1)
    with pytest.raises(ValueError):
        poincare(State(1.0, 0.0, 1.0, 0.0), p, s, FAST_IC, collect=0)


def test_detect_period_basics():
    const = PoincareSet(np.ones((40, 4)), 0.0, 0)
    assert detect_period(const) == 1
    alt = PoincareSet(np.array([[0, 0, 0, 0], [1, 1, 1, 1]] * 20, dtype=float), 0.0, 0)
    assert detect_period(alt) == 2
    rng = np.random.default_rng(0)
    noise = PoincareSet(rng.uniform(0.5, 1.5, size=(64, 4)), 0.0, 0)
    assert detect_period(noise) is None
    with pytest.raises(ValueError):
        detect_period(const, tol=0.0)


def test_is_synchronous():
    on = PoincareSet(np.tile([1.1, 0.2, 1.1, 0.2], (10, 1)), 0.0, 0)
    assert is_synchronous(on)
    off = PoincareSet(np.tile([1.1, 0.2, 1.0, 0.2], (10, 1)), 0.0, 0)
    assert not is_synchronous(off)


def test_swapped_set():
    ps = PoincareSet(np.array([[1.0, 2.0, 3.0, 4.0]]), 0.0, 0)
    assert np.array_equal(ps.swapped().samples, [[3.0, 4.0, 1.0, 2.0]])


# ---------------------------------------------------------------- analyze


def test_analyze_period4_cycle_full_record():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=600, measure_periods=2000, conv_tol=1e-3)
    rec = analyze(State(1.0, 0.0, 1.0, 0.0), p, cfg=cfg)
    assert not rec.failed
    assert rec.spectrum.converged
    assert rec.attractor_class is AttractorClass.PERIODIC
    assert rec.synchrony is Synchrony.SYNCHRONOUS
    assert rec.period == 4
    assert rec.spectrum.effective[0] < -cfg.lambda_tr
    assert rec.point.d_ratio == pytest.approx(13.0)
    # record class is consistent with the stored spectrum
    assert classify(rec.spectrum, cfg.lambda_tr) is rec.attractor_class


def test_analyze_swap_symmetry_of_spectra():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=600, measure_periods=2000, conv_tol=1e-3)
    x0 = State(0.8, 0.3, 1.2, -0.2)
    ra = analyze(x0, p, cfg=cfg)
    rb = analyze(swap(x0), p, cfg=cfg)
    assert ra.attractor_class is rb.attractor_class
    assert np.allclose(ra.spectrum.exponents, rb.spectrum.exponents, atol=2 * cfg.conv_tol)


def test_analyze_self_consistency_on_one_attractor():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=600, measure_periods=2000, conv_tol=1e-3)
    ra = analyze(State(1.0, 0.0, 1.0, 0.0), p, cfg=cfg)
    rb = analyze(State(1.05, 0.02, 1.05, 0.02), p, cfg=cfg)
    assert ra.attractor_class is rb.attractor_class
    assert np.allclose(ra.spectrum.exponents, rb.spectrum.exponents, atol=2 * cfg.conv_tol)


def test_analyze_failure_is_marked_not_raised():
    p = fig1_params(p_ac=0.0)
    rec = analyze(State(0.005, 0.0, 1.0, 0.0), p, cfg=fast_cfg())
    assert rec.failed
    assert "floor" in rec.error
    assert rec.attractor_class is None


def test_analyze_spectrum_sum_matches_divergence():
    p = fig1_params(d_ratio=13.0)
    cfg = fast_cfg(transient_periods=600, measure_periods=2000, conv_tol=1e-3)
    rec = analyze(State(1.0, 0.0, 1.0, 0.0), p, cfg=cfg)
    total = rec.spectrum.total
    div = rec.spectrum.divergence_rate
    assert abs(total - div) <= 0.02 * abs(div)
