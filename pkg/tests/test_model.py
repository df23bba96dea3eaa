"""Model-layer tests: scales, wall pressure, acceleration solve, Jacobian,
symmetry utilities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bubblepair import (
    InvalidParamsError,
    ModelBreakdownError,
    NearSingularError,
    PhysicalParams,
    State,
    acceleration,
    derive_scales,
    jacobian,
    rest_state,
    shell_pressure,
    swap,
    sync_deviation,
    vector_field,
)

from conftest import (
    ACC_EPS1_REF,
    ACC_EPS097_REF,
    ACC_STATE,
    OMEGA0_REF,
    OMEGA_ND_REF,
    P0_REF,
    PRESS_DRIVEN_REF,
    PRESS_UNDRIVEN_REF,
    fig1_params,
)


def states(min_r=0.3, max_r=2.5, max_u=2.0):
    finite = dict(allow_nan=False, allow_infinity=False)
    return st.builds(
        State,
        r1=st.floats(min_r, max_r, **finite),
        u1=st.floats(-max_u, max_u, **finite),
        r2=st.floats(min_r, max_r, **finite),
        u2=st.floats(-max_u, max_u, **finite),
        theta=st.floats(0.0, 2.0 * math.pi, exclude_max=True, **finite),
    )


# ---------------------------------------------------------------- scales


def test_p0_is_static_minus_vapor():
    s = derive_scales(PhysicalParams())
    assert s.p0 == P0_REF


def test_omega0_regression():
    s = derive_scales(PhysicalParams())
    assert s.omega0 == pytest.approx(OMEGA0_REF, rel=1e-12)
    assert s.omega_nd == pytest.approx(OMEGA_ND_REF, rel=1e-12)


def test_omega0_single_term_when_shell_and_tension_vanish():
    p = PhysicalParams(chi=0.0, sigma=0.0)
    s = derive_scales(p)
    expected = math.sqrt(3.0 * p.gamma * s.p0 / (p.rho * p.r10**2))
    assert s.omega0 == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "kw, field",
    [
        (dict(eps=-0.5), "eps"),
        (dict(eps=0.0), "eps"),
        (dict(rho=-1.0), "rho"),
        (dict(p_stat=2000.0), "p_stat"),  # below vapor pressure
        (dict(d=2.0e-6), "d"),  # bubbles overlap at rest
    ],
)
def test_invalid_params_rejected(kw, field):
    with pytest.raises(InvalidParamsError, match=field):
        PhysicalParams(**kw)


# ---------------------------------------------------------- wall pressure


def test_pressure_zero_at_own_equilibrium():
    for eps in (1.0, 0.97, 1.03):
        p = fig1_params(p_ac=0.0, eps=eps)
        s = derive_scales(p)
        assert abs(shell_pressure(1.0, 0.0, 1, p, s)) < 1e-14
        assert abs(shell_pressure(eps, 0.0, 2, p, s)) < 1e-14


def test_pressure_drive_vanishes_at_theta_zero():
    p_on = fig1_params(p_ac=1.2e6)
    p_off = fig1_params(p_ac=0.0)
    s_on, s_off = derive_scales(p_on), derive_scales(p_off)
    assert shell_pressure(0.8, 0.4, 1, p_on, s_on, theta=0.0) == shell_pressure(
        0.8, 0.4, 1, p_off, s_off, theta=0.0
    )


def test_pressure_interior_regression():
    p = fig1_params()
    s = derive_scales(p)
    assert shell_pressure(0.9, 0.1, 1, p, s, theta=math.pi / 5) == pytest.approx(
        PRESS_DRIVEN_REF, rel=1e-12
    )
    p0 = fig1_params(p_ac=0.0)
    assert shell_pressure(0.9, 0.1, 1, p0, derive_scales(p0), theta=0.0) == pytest.approx(
        PRESS_UNDRIVEN_REF, rel=1e-12
    )


def test_pressure_rejects_nonpositive_radius():
    p = fig1_params()
    s = derive_scales(p)
    with pytest.raises(ValueError, match="radius"):
        shell_pressure(0.0, 0.0, 1, p, s)
    with pytest.raises(ValueError, match="bubble_index"):
        shell_pressure(1.0, 0.0, 3, p, s)


# ------------------------------------------------------------ acceleration


def test_acceleration_zero_at_undriven_equilibrium():
    p = fig1_params(p_ac=0.0)
    s = derive_scales(p)
    a1, a2 = acceleration(State(1.0, 0.0, 1.0, 0.0, 1.3), p, s)
    assert abs(a1) < 1e-13 and abs(a2) < 1e-13


def test_acceleration_symmetric_state_gives_equal_accelerations():
    p = fig1_params()
    s = derive_scales(p)
    a1, a2 = acceleration(State(0.8, 0.5, 0.8, 0.5, 2.0), p, s)
    assert a1 == a2


def test_acceleration_regression_pair():
    p = fig1_params()
    s = derive_scales(p)
    a = acceleration(State(*ACC_STATE, math.pi / 3), p, s)
    assert a == pytest.approx(ACC_EPS1_REF, rel=1e-11)
    p2 = fig1_params(eps=0.97)
    a2 = acceleration(State(*ACC_STATE, math.pi / 3), p2, derive_scales(p2))
    assert a2 == pytest.approx(ACC_EPS097_REF, rel=1e-11)


def test_acceleration_near_singular_detection():
    p = fig1_params()
    s = derive_scales(p)
    with pytest.raises(NearSingularError):
        acceleration(State(1.0, 0.0, 1.0, 0.0), p, s, det_tol=1.0)


def _pressure_partials_fd(r, u, idx, p, s, theta, h=1e-6):
    # independent central differences of the public pressure function
    dp_dr = (
        shell_pressure(r + h, u, idx, p, s, theta)
        - shell_pressure(r - h, u, idx, p, s, theta)
    ) / (2 * h)
    dp_du = (
        shell_pressure(r, u + h, idx, p, s, theta)
        - shell_pressure(r, u - h, idx, p, s, theta)
    ) / (2 * h)
    dp_dth = (
        shell_pressure(r, u, idx, p, s, theta + h)
        - shell_pressure(r, u, idx, p, s, theta - h)
    ) / (2 * h)
    return dp_dr, dp_du, dp_dth


def _wall_residuals(x, a1, a2, p, s):
    """Back-substitute accelerations into the two wall equations, assembled
    here from the pressure operation and finite-difference pressure rates
    (independent of the production coefficient assembly)."""
    cnd = p.c / (p.r10 * s.omega0)
    delta = s.d_ratio
    out = []
    comps = [(x.r1, x.u1, a1, x.r2, x.u2, a2, 1), (x.r2, x.u2, a2, x.r1, x.u1, a1, 2)]
    for r, u, a, rj, uj, aj, idx in comps:
        pv = shell_pressure(r, u, idx, p, s, x.theta)
        dp_dr, dp_du, dp_dth = _pressure_partials_fd(r, u, idx, p, s, x.theta)
        dp_dtau = dp_dr * u + dp_du * a + dp_dth * s.omega_nd
        lhs = (1.0 - u / cnd) * r * a + 1.5 * (1.0 - u / (3.0 * cnd)) * u * u
        rhs = (1.0 + u / cnd) * pv + (r / cnd) * dp_dtau - (
            2.0 * rj * uj * uj + rj * rj * aj
        ) / delta
        scale = max(
            abs((1.0 - u / cnd) * r * a),
            abs(1.5 * u * u),
            abs(pv),
            abs((r / cnd) * dp_dtau),
            abs((2.0 * rj * uj * uj + rj * rj * aj) / delta),
            1e-30,
        )
        out.append((lhs - rhs) / scale)
    return out


def test_acceleration_back_substitution_residual():
    p = fig1_params()
    s = derive_scales(p)
    rng = np.random.default_rng(7)
    for _ in range(200):
        x = State(
            rng.uniform(0.5, 2.0),
            rng.uniform(-1.5, 1.5),
            rng.uniform(0.5, 2.0),
            rng.uniform(-1.5, 1.5),
            rng.uniform(0.0, 2 * math.pi),
        )
        a1, a2 = acceleration(x, p, s)
        res = _wall_residuals(x, a1, a2, p, s)
        assert max(abs(r) for r in res) < 1e-8  # FD partials limit the floor


# ------------------------------------------------------------ vector field


def test_vector_field_at_equilibrium():
    p = fig1_params(p_ac=0.0)
    s = derive_scales(p)
    d = vector_field(rest_state(p, theta=0.4), p, s)
    assert (d.dr1, d.du1, d.dr2, d.du2) == (0.0, 0.0, 0.0, 0.0)
    assert d.dtheta == s.omega_nd


def test_static_balance_for_unequal_bubbles():
    for eps in (0.97, 1.0, 1.03):
        p = fig1_params(p_ac=0.0, eps=eps)
        s = derive_scales(p)
        d = vector_field(rest_state(p, theta=1.0), p, s)
        assert max(abs(v) for v in (d.dr1, d.du1, d.dr2, d.du2)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(states())
def test_vector_field_swap_equivariance(x):
    p = fig1_params()
    s = derive_scales(p)
    fx = vector_field(x, p, s).to_array()
    fswap = vector_field(swap(x), p, s).to_array()
    swapped_fx = fx[[2, 3, 0, 1, 4]]
    assert np.linalg.norm(fswap - swapped_fx) <= 1e-12 * np.linalg.norm(fx)


# ---------------------------------------------------------------- jacobian


def test_jacobian_theta_row_is_zero():
    p = fig1_params()
    s = derive_scales(p)
    jac = jacobian(State(1.1, 0.2, 0.9, -0.1, 0.7), p, s)
    assert np.all(jac[4, :] == 0.0)
    assert np.any(jac[:4, 4] != 0.0)  # drive sensitivity present


def test_jacobian_matches_directional_derivative_second_order():
    p = fig1_params()
    s = derive_scales(p)
    x = State(1.1, 0.2, 0.9, -0.1, 0.7)
    jac = jacobian(x, p, s, h_rel=1e-7)
    rng = np.random.default_rng(3)
    v = rng.normal(size=5)
    v /= np.linalg.norm(v)
    xa = x.to_array()

    def fd_dir(h):
        fp = vector_field(State.from_array(xa + h * v), p, s).to_array()
        fm = vector_field(State.from_array(xa - h * v), p, s).to_array()
        return (fp - fm) / (2 * h)

    jv = jac @ v
    err_h = np.linalg.norm(fd_dir(1e-3) - jv)
    err_h2 = np.linalg.norm(fd_dir(5e-4) - jv)
    assert err_h2 < err_h
    assert err_h / err_h2 == pytest.approx(4.0, rel=0.35)  # O(h^2)


def test_equilibrium_is_linearly_stable():
    p = fig1_params(p_ac=0.0)
    s = derive_scales(p)
    jac = jacobian(rest_state(p), p, s)
    eig = np.linalg.eigvals(jac[:4, :4])
    assert np.all(eig.real < 0.0)


# ------------------------------------------------------- symmetry helpers


def test_swap_permutes_components():
    x = State(1.1, 0.2, 0.9, -0.3, 0.5)
    y = swap(x)
    assert (y.r1, y.u1, y.r2, y.u2, y.theta) == (0.9, -0.3, 1.1, 0.2, 0.5)


@settings(max_examples=100, deadline=None)
@given(states())
def test_swap_is_involution(x):
    assert swap(swap(x)) == x


@settings(max_examples=100, deadline=None)
@given(states())
def test_swap_fixed_points_are_synchronous(x):
    if sync_deviation(x) == 0.0:
        assert swap(x) == x
    else:
        assert swap(x) != x


def test_sync_deviation_values():
    assert sync_deviation(State(1.0, 0.0, 1.0, 0.0, 0.2)) == 0.0
    assert sync_deviation(State(1.1, 0.0, 1.0, 0.0, 0.2)) == pytest.approx(0.1)
    x = State(1.2, 0.4, 0.8, -0.3, 1.0)
    assert sync_deviation(swap(x)) == sync_deviation(x)


def test_state_wraps_theta_and_rejects_bad_radii():
    assert State(1.0, 0.0, 1.0, 0.0, 2 * math.pi + 0.5).theta == pytest.approx(0.5)
    assert State(1.0, 0.0, 1.0, 0.0, -0.5).theta == pytest.approx(2 * math.pi - 0.5)
    with pytest.raises(ModelBreakdownError):
        State(-1.0, 0.0, 1.0, 0.0)
    with pytest.raises(InvalidParamsError):
        State(1.0, float("nan"), 1.0, 0.0)
