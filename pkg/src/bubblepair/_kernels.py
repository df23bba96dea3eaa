"""Numba kernels for the coupled-bubble vector field and its integration.

Everything in here works on flat float64 arrays so the hot loops stay in
compiled code and release the GIL. The wrapper modules own validation,
dataclasses and exceptions; kernels communicate failure through integer
status codes.

State layout: y = (r1, u1, r2, u2, theta).

Model-parameter vector ``mp`` (built by model._mp_vector):
    0  p0n     P0 / (rho r10^2 w0^2)
    1  s2      2 sigma / (rho r10^3 w0^2)
    2  x4      4 chi / (rho r10^3 w0^2)
    3  v4      4 eta_l / (rho r10^2 w0)
    4  k4      4 kappa_s / (rho r10^3 w0)
    5  cnd     c / (r10 w0)
    6  pac     P_ac / (rho r10^2 w0^2)
    7  om      omega / omega0
    8  r20     eps (equilibrium radius of bubble 2 in r10 units)
    9  invd    r10 / d
    10 g3      3*gamma
    11 rfloor  abort radius
    12 dettol  relative determinant floor of the 2x2 solve

Integrator-parameter vector ``ip`` (built by integrator._ip_vector):
    0 rtol, 1 atol, 2 h0, 3 hmax, 4 safety, 5 hmin   (steps in tau units)
"""

import numpy as np
from numba import njit

TWO_PI = 2.0 * np.pi

OK = 0
ERR_RADIUS_DOMAIN = 1
ERR_SINGULAR = 2
ERR_RADIUS_FLOOR = 3
ERR_STEP_UNDERFLOW = 4
ERR_TANGENT_DEGENERATE = 5
ERR_NONFINITE = 6

# Cash-Karp 5(4) tableau
C2, C3, C4, C5, C6 = 0.2, 0.3, 0.6, 1.0, 0.875
A21 = 0.2
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 0.3, -0.9, 1.2
A51, A52, A53, A54 = -11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0
A61, A62, A63, A64, A65 = (
    1631.0 / 55296.0,
    175.0 / 512.0,
    575.0 / 13824.0,
    44275.0 / 110592.0,
    253.0 / 4096.0,
)
B1, B3, B4, B6 = 37.0 / 378.0, 250.0 / 621.0, 125.0 / 594.0, 512.0 / 1771.0
# 5th-order minus embedded 4th-order weights
E1 = B1 - 2825.0 / 27648.0
E3 = B3 - 18575.0 / 48384.0
E4 = B4 - 13525.0 / 55296.0
E5 = -277.0 / 14336.0
E6 = B6 - 0.25


@njit(cache=True, nogil=True, inline="always")
def _gas_pow(q, g3):
    # (r_eq/r)**(3*gamma); fast path for the adiabatic default 3*gamma = 4
    if g3 == 4.0:
        q2 = q * q
        return q2 * q2
    return q**g3


@njit(cache=True, nogil=True, inline="always")
def press_nd(r, u, r_eq, theta, mp):
    """Wall pressure of one bubble over rho*r10^2*w0^2. Assumes r > 0."""
    gas = (mp[0] + mp[1] / r_eq) * _gas_pow(r_eq / r, mp[10])
    return (
        gas
        - mp[3] * u / r
        - mp[1] / r
        - mp[0]
        - mp[2] * (1.0 / r_eq - 1.0 / r)
        - mp[4] * u / (r * r)
        - mp[6] * np.sin(theta)
    )


@njit(cache=True, nogil=True, inline="always")
def _press_dr(r, u, r_eq, mp):
    # radial partial of press_nd at fixed u, theta
    rr = 1.0 / r
    gas = (mp[0] + mp[1] / r_eq) * _gas_pow(r_eq / r, mp[10])
    return (
        -mp[10] * gas * rr
        + (mp[3] * u + mp[1] - mp[2]) * rr * rr
        + 2.0 * mp[4] * u * rr * rr * rr
    )


@njit(cache=True, nogil=True)
def accel(y, mp):
    """Solve the 2x2 linear system for the two wall accelerations.

    Both second derivatives enter linearly: through the (r_i/c) dP_i/dtau
    term of their own equation and through the neighbor coupling
    d/dtau(r_j^2 u_j)/delta. Collecting them gives A (a1, a2)^T = b.
    Returns (a1, a2, status).
    """
    r1, u1, r2, u2, th = y[0], y[1], y[2], y[3], y[4]
    if not (r1 > 0.0 and r2 > 0.0):
        return 0.0, 0.0, ERR_RADIUS_DOMAIN
    cnd = mp[5]
    invd = mp[9]
    om = mp[7]
    dpth = -mp[6] * np.cos(th)

    p1 = press_nd(r1, u1, 1.0, th, mp)
    p2 = press_nd(r2, u2, mp[8], th, mp)
    dp1 = _press_dr(r1, u1, 1.0, mp)
    dp2 = _press_dr(r2, u2, mp[8], mp)

    a11 = (1.0 - u1 / cnd) * r1 + (mp[3] + mp[4] / r1) / cnd
    a22 = (1.0 - u2 / cnd) * r2 + (mp[3] + mp[4] / r2) / cnd
    a12 = r2 * r2 * invd
    a21 = r1 * r1 * invd

    b1 = (
        (1.0 + u1 / cnd) * p1
        + (r1 / cnd) * (dp1 * u1 + dpth * om)
        - 1.5 * (1.0 - u1 / (3.0 * cnd)) * u1 * u1
        - 2.0 * r2 * u2 * u2 * invd
    )
    b2 = (
        (1.0 + u2 / cnd) * p2
        + (r2 / cnd) * (dp2 * u2 + dpth * om)
        - 1.5 * (1.0 - u2 / (3.0 * cnd)) * u2 * u2
        - 2.0 * r1 * u1 * u1 * invd
    )

    det = a11 * a22 - a12 * a21
    nrm2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22
    if np.abs(det) <= mp[12] * nrm2:
        return 0.0, 0.0, ERR_SINGULAR
    return (b1 * a22 - b2 * a12) / det, (b2 * a11 - b1 * a21) / det, OK


@njit(cache=True, nogil=True)
def vf(y, mp, out):
    """Autonomous 5D vector field; fills ``out``, returns a status code."""
    a1, a2, st = accel(y, mp)
    if st != OK:
        return st
    out[0] = y[1]
    out[1] = a1
    out[2] = y[3]
    out[3] = a2
    out[4] = mp[7]
    if not (np.isfinite(a1) and np.isfinite(a2)):
        return ERR_NONFINITE
    return OK


@njit(cache=True, nogil=True)
def fd_jacobian(y, mp, h_rel, jac, fp, fm, yp):
    """Central-difference Jacobian, column by column.

    Per-component step h_k = h_rel * max(|y_k|, 1). The theta row is set
    to exactly zero afterwards (the phase advances at constant rate).
    """
    for k in range(5):
        yp[:] = y
        h = h_rel * max(np.abs(y[k]), 1.0)
        yp[k] = y[k] + h
        st = vf(yp, mp, fp)
        if st != OK:
            return st
        yp[k] = y[k] - h
        st = vf(yp, mp, fm)
        if st != OK:
            return st
        inv2h = 0.5 / h
        for i in range(5):
            jac[i, k] = (fp[i] - fm[i]) * inv2h
    for k in range(5):
        jac[4, k] = 0.0
    return OK


@njit(cache=True, nogil=True)
def _trial_step(y, h, mp, ynew, yerr, ks, ys):
    """One embedded Cash-Karp step. Fills ynew (5th order) and yerr."""
    st = vf(y, mp, ks[0])
    if st != OK:
        return st
    for i in range(5):
        ys[i] = y[i] + h * A21 * ks[0, i]
    st = vf(ys, mp, ks[1])
    if st != OK:
        return st
    for i in range(5):
        ys[i] = y[i] + h * (A31 * ks[0, i] + A32 * ks[1, i])
    st = vf(ys, mp, ks[2])
    if st != OK:
        return st
    for i in range(5):
        ys[i] = y[i] + h * (A41 * ks[0, i] + A42 * ks[1, i] + A43 * ks[2, i])
    st = vf(ys, mp, ks[3])
    if st != OK:
        return st
    for i in range(5):
        ys[i] = y[i] + h * (
            A51 * ks[0, i] + A52 * ks[1, i] + A53 * ks[2, i] + A54 * ks[3, i]
        )
    st = vf(ys, mp, ks[4])
    if st != OK:
        return st
    for i in range(5):
        ys[i] = y[i] + h * (
            A61 * ks[0, i]
            + A62 * ks[1, i]
            + A63 * ks[2, i]
            + A64 * ks[3, i]
            + A65 * ks[4, i]
        )
    st = vf(ys, mp, ks[5])
    if st != OK:
        return st
    for i in range(5):
        ynew[i] = y[i] + h * (
            B1 * ks[0, i] + B3 * ks[2, i] + B4 * ks[3, i] + B6 * ks[5, i]
        )
        yerr[i] = h * (
            E1 * ks[0, i]
            + E3 * ks[2, i]
            + E4 * ks[3, i]
            + E5 * ks[4, i]
            + E6 * ks[5, i]
        )
        if not np.isfinite(ynew[i]):
            return ERR_NONFINITE
    return OK


@njit(cache=True, nogil=True, inline="always")
def _err_norm(y, ynew, yerr, rtol, atol):
    s = 0.0
    for i in range(5):
        sc = atol + rtol * max(np.abs(y[i]), np.abs(ynew[i]))
        e = yerr[i] / sc
        s += e * e
    return np.sqrt(s / 5.0)


@njit(cache=True, nogil=True, inline="always")
def _controller(hs, err, safety, hmax):
    # h_next = h * safety * err**(-1/5), factor clamped to [1/10, 5], h <= hmax
    if err > 0.0:
        fac = safety * err ** (-0.2)
        if fac > 5.0:
            fac = 5.0
        elif fac < 0.1:
            fac = 0.1
    else:
        fac = 5.0
    hn = hs * fac
    if hn > hmax:
        hn = hmax
    return hn


@njit(cache=True, nogil=True, inline="always")
def _wrap_theta(y):
    th = y[4] % TWO_PI
    if th >= TWO_PI:
        th -= TWO_PI
    y[4] = th


@njit(cache=True, nogil=True)
def advance(y, tau, tau_target, h, mp, ip):
    """Adaptive stepping from tau to tau_target with exact endpoint landing.

    Mutates y. Returns (tau, h, status, n_accepted).
    """
    rtol, atol, hmax, safety, hmin = ip[0], ip[1], ip[3], ip[4], ip[5]
    ynew = np.empty(5)
    yerr = np.empty(5)
    ks = np.empty((6, 5))
    ys = np.empty(5)
    n_acc = 0
    last_bad = ERR_STEP_UNDERFLOW
    while tau < tau_target:
        rem = tau_target - tau
        clamped = h >= rem
        hs = rem if clamped else h
        st = _trial_step(y, hs, mp, ynew, yerr, ks, ys)
        if st == OK:
            err = _err_norm(y, ynew, yerr, rtol, atol)
            if err <= 1.0:
                for i in range(5):
                    y[i] = ynew[i]
                _wrap_theta(y)
                n_acc += 1
                if not (y[0] >= mp[11] and y[2] >= mp[11]):
                    return tau, hs, ERR_RADIUS_FLOOR, n_acc
                if clamped:
                    # exact landing; keep the natural step for the next span
                    tau = tau_target
                else:
                    new_tau = tau + hs
                    if new_tau == tau:  # below float resolution of tau
                        tau = tau_target
                    else:
                        tau = new_tau
                    h = _controller(hs, err, safety, hmax)
                continue
            # accuracy rejection
            h = _controller(hs, err, safety, hmax)
            last_bad = ERR_STEP_UNDERFLOW
        else:
            # stage left the model domain; shrink hard and retry
            h = hs * 0.1
            last_bad = st
        if h < hmin:
            return tau, h, last_bad, n_acc
    return tau, h, OK, n_acc


@njit(cache=True, nogil=True)
def _trial_step_tan(y, vmat, h, mp, h_rel, ynew, vnew, yerr, ks, kv, ys, vs, jac, fp, fm, yp):
    """Cash-Karp step co-integrating the 5x5 tangent frame.

    The tangents obey dv/dtau = J(x(tau)) v with J evaluated by finite
    differences at each stage's base state; the same J supplies the trace
    used for the divergence quadrature. Error control stays on the base
    state only (tangent columns are rescaled by the caller anyway).
    Returns (status, trace_increment).
    """
    tr_acc = 0.0
    for s in range(6):
        if s == 0:
            for i in range(5):
                ys[i] = y[i]
                for j in range(5):
                    vs[i, j] = vmat[i, j]
        elif s == 1:
            for i in range(5):
                ys[i] = y[i] + h * A21 * ks[0, i]
                for j in range(5):
                    vs[i, j] = vmat[i, j] + h * A21 * kv[0, i, j]
        elif s == 2:
            for i in range(5):
                ys[i] = y[i] + h * (A31 * ks[0, i] + A32 * ks[1, i])
                for j in range(5):
                    vs[i, j] = vmat[i, j] + h * (A31 * kv[0, i, j] + A32 * kv[1, i, j])
        elif s == 3:
            for i in range(5):
                ys[i] = y[i] + h * (A41 * ks[0, i] + A42 * ks[1, i] + A43 * ks[2, i])
                for j in range(5):
                    vs[i, j] = vmat[i, j] + h * (
                        A41 * kv[0, i, j] + A42 * kv[1, i, j] + A43 * kv[2, i, j]
                    )
        elif s == 4:
            for i in range(5):
                ys[i] = y[i] + h * (
                    A51 * ks[0, i] + A52 * ks[1, i] + A53 * ks[2, i] + A54 * ks[3, i]
                )
                for j in range(5):
                    vs[i, j] = vmat[i, j] + h * (
                        A51 * kv[0, i, j]
                        + A52 * kv[1, i, j]
                        + A53 * kv[2, i, j]
                        + A54 * kv[3, i, j]
                    )
        else:
            for i in range(5):
                ys[i] = y[i] + h * (
                    A61 * ks[0, i]
                    + A62 * ks[1, i]
                    + A63 * ks[2, i]
                    + A64 * ks[3, i]
                    + A65 * ks[4, i]
                )
                for j in range(5):
                    vs[i, j] = vmat[i, j] + h * (
                        A61 * kv[0, i, j]
                        + A62 * kv[1, i, j]
                        + A63 * kv[2, i, j]
                        + A64 * kv[3, i, j]
                        + A65 * kv[4, i, j]
                    )
        st = vf(ys, mp, ks[s])
        if st != OK:
            return st, 0.0
        st = fd_jacobian(ys, mp, h_rel, jac, fp, fm, yp)
        if st != OK:
            return st, 0.0
        for i in range(5):
            for j in range(5):
                acc = 0.0
                for k in range(5):
                    acc += jac[i, k] * vs[k, j]
                kv[s, i, j] = acc
        if s == 0:
            tr_acc += B1 * (jac[0, 0] + jac[1, 1] + jac[2, 2] + jac[3, 3] + jac[4, 4])
        elif s == 2:
            tr_acc += B3 * (jac[0, 0] + jac[1, 1] + jac[2, 2] + jac[3, 3] + jac[4, 4])
        elif s == 3:
            tr_acc += B4 * (jac[0, 0] + jac[1, 1] + jac[2, 2] + jac[3, 3] + jac[4, 4])
        elif s == 5:
            tr_acc += B6 * (jac[0, 0] + jac[1, 1] + jac[2, 2] + jac[3, 3] + jac[4, 4])
    for i in range(5):
        ynew[i] = y[i] + h * (
            B1 * ks[0, i] + B3 * ks[2, i] + B4 * ks[3, i] + B6 * ks[5, i]
        )
        yerr[i] = h * (
            E1 * ks[0, i]
            + E3 * ks[2, i]
            + E4 * ks[3, i]
            + E5 * ks[4, i]
            + E6 * ks[5, i]
        )
        if not np.isfinite(ynew[i]):
            return ERR_NONFINITE, 0.0
        for j in range(5):
            vnew[i, j] = vmat[i, j] + h * (
                B1 * kv[0, i, j] + B3 * kv[2, i, j] + B4 * kv[3, i, j] + B6 * kv[5, i, j]
            )
    return OK, h * tr_acc


@njit(cache=True, nogil=True)
def advance_tan(y, vmat, tau, tau_target, h, mp, ip, h_rel):
    """Adaptive stepping with tangents to tau_target (exact landing).

    Mutates y and vmat. Returns (tau, h, status, trace_integral).
    """
    rtol, atol, hmax, safety, hmin = ip[0], ip[1], ip[3], ip[4], ip[5]
    ynew = np.empty(5)
    yerr = np.empty(5)
    vnew = np.empty((5, 5))
    ks = np.empty((6, 5))
    kv = np.empty((6, 5, 5))
    ys = np.empty(5)
    vs = np.empty((5, 5))
    jac = np.empty((5, 5))
    fp = np.empty(5)
    fm = np.empty(5)
    yp = np.empty(5)
    trace_int = 0.0
    last_bad = ERR_STEP_UNDERFLOW
    while tau < tau_target:
        rem = tau_target - tau
        clamped = h >= rem
        hs = rem if clamped else h
        st, tr_inc = _trial_step_tan(
            y, vmat, hs, mp, h_rel, ynew, vnew, yerr, ks, kv, ys, vs, jac, fp, fm, yp
        )
        if st == OK:
            err = _err_norm(y, ynew, yerr, rtol, atol)
            if err <= 1.0:
                for i in range(5):
                    y[i] = ynew[i]
                    for j in range(5):
                        vmat[i, j] = vnew[i, j]
                _wrap_theta(y)
                trace_int += tr_inc
                if not (y[0] >= mp[11] and y[2] >= mp[11]):
                    return tau, hs, ERR_RADIUS_FLOOR, trace_int
                if clamped:
                    tau = tau_target
                else:
                    new_tau = tau + hs
                    tau = tau_target if new_tau == tau else new_tau
                    h = _controller(hs, err, safety, hmax)
                continue
            h = _controller(hs, err, safety, hmax)
            last_bad = ERR_STEP_UNDERFLOW
        else:
            h = hs * 0.1
            last_bad = st
        if h < hmin:
            return tau, h, last_bad, trace_int
    return tau, h, OK, trace_int


@njit(cache=True, nogil=True)
def gram_schmidt(vmat, lognorms):
    """Orthonormalize the columns in place; log of each column's norm out."""
    for j in range(5):
        for i in range(j):
            dot = 0.0
            for k in range(5):
                dot += vmat[k, i] * vmat[k, j]
            for k in range(5):
                vmat[k, j] -= dot * vmat[k, i]
        s = 0.0
        for k in range(5):
            s += vmat[k, j] * vmat[k, j]
        nrm = np.sqrt(s)
        if not np.isfinite(nrm) or nrm < 1e-300:
            return ERR_TANGENT_DEGENERATE
        lognorms[j] = np.log(nrm)
        inv = 1.0 / nrm
        for k in range(5):
            vmat[k, j] *= inv
    return OK


@njit(cache=True, nogil=True)
def benettin_run(
    y,
    vmat,
    tau0,
    n_renorms,
    interval,
    mp,
    ip,
    h_rel,
    h_start,
    log0,
    trace0,
    cumlog,
    samples,
    tracecum,
):
    """Tangent integration with renormalization every ``interval``.

    Records, per renormalization k: the running per-column log-norm sums in
    cumlog[k], the base point (r1,u1,r2,u2) at the renormalization instant
    in samples[k], and the running divergence integral in tracecum[k].
    log0/trace0 carry accumulators across extension calls.

    Returns (tau, h, status, n_completed).
    """
    h = h_start
    tau = tau0
    acc0 = log0[0]
    acc1 = log0[1]
    acc2 = log0[2]
    acc3 = log0[3]
    acc4 = log0[4]
    trc = trace0
    ln = np.empty(5)
    for k in range(n_renorms):
        target = tau0 + (k + 1) * interval
        tau, h, st, tr_inc = advance_tan(y, vmat, tau, target, h, mp, ip, h_rel)
        trc += tr_inc
        if st != OK:
            return tau, h, st, k
        st = gram_schmidt(vmat, ln)
        if st != OK:
            return tau, h, st, k
        acc0 += ln[0]
        acc1 += ln[1]
        acc2 += ln[2]
        acc3 += ln[3]
        acc4 += ln[4]
        cumlog[k, 0] = acc0
        cumlog[k, 1] = acc1
        cumlog[k, 2] = acc2
        cumlog[k, 3] = acc3
        cumlog[k, 4] = acc4
        samples[k, 0] = y[0]
        samples[k, 1] = y[1]
        samples[k, 2] = y[2]
        samples[k, 3] = y[3]
        tracecum[k] = trc
    return tau, h, OK, n_renorms


@njit(cache=True, nogil=True)
def strobe_run(y, tau0, n_samples, period, mp, ip, h_start, out):
    """Record (r1,u1,r2,u2) at tau0 + k*period for k = 1..n_samples."""
    h = h_start
    tau = tau0
    for k in range(n_samples):
        target = tau0 + (k + 1) * period
        tau, h, st, _ = advance(y, tau, target, h, mp, ip)
        if st != OK:
            return tau, h, st, k
        out[k, 0] = y[0]
        out[k, 1] = y[1]
        out[k, 2] = y[2]
        out[k, 3] = y[3]
    return tau, h, OK, n_samples


@njit(cache=True, nogil=True)
def integrate_fixed(y, h, n_steps, mp):
    """Fixed-step Cash-Karp advance (5th-order result); no controller.

    Exists for convergence-order measurements only.
    """
    ynew = np.empty(5)
    yerr = np.empty(5)
    ks = np.empty((6, 5))
    ys = np.empty(5)
    for _ in range(n_steps):
        st = _trial_step(y, h, mp, ynew, yerr, ks, ys)
        if st != OK:
            return st
        for i in range(5):
            y[i] = ynew[i]
        _wrap_theta(y)
        if not (y[0] >= mp[11] and y[2] >= mp[11]):
            return ERR_RADIUS_FLOOR
    return OK
