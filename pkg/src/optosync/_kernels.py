"""Compiled numerical cores.

The classical-mean and covariance dynamics are advanced together by a
fixed-step fourth-order Runge-Kutta loop.  Everything here operates on a
flat parameter vector (see :data:`optosync.model.PARAM_ORDER`) and plain
float64 arrays so it can be JIT compiled; the public wrappers live in
:mod:`optosync.model` and :mod:`optosync.dynamics`.

All loops are written out elementwise with a fixed evaluation order, so
repeated runs with identical inputs are bit-identical.
"""

import math

import numpy as np
from numba import njit

# indices into the packed parameter vector
I_DELTA1, I_DELTA2, I_OMEGA1, I_OMEGA2 = 0, 1, 2, 3
I_G, I_GAMMA, I_KAPPA, I_E = 4, 5, 6, 7
I_LAM, I_AC, I_OMEGAC, I_NBATH = 8, 9, 10, 11

DIM = 8


@njit(cache=True, nogil=True)
def mean_rhs(out, p, s, t):
    """Time derivative of the 8 classical mean-field components."""
    g = p[I_G]
    gamma = p[I_GAMMA]
    kappa = p[I_KAPPA]
    drive = p[I_E]
    lam = p[I_LAM]
    mod = 1.0 + p[I_AC] * math.cos(p[I_OMEGAC] * t)
    q1, p1, xr1, xi1 = s[0], s[1], s[2], s[3]
    q2, p2, xr2, xi2 = s[4], s[5], s[6], s[7]
    f1 = p[I_DELTA1] * mod + g * q1
    f2 = p[I_DELTA2] * mod + g * q2
    out[0] = p[I_OMEGA1] * p1
    out[1] = -p[I_OMEGA1] * q1 - gamma * p1 + g * (xr1 * xr1 + xi1 * xi1)
    out[2] = -kappa * xr1 - f1 * xi1 + drive + lam * xi2
    out[3] = -kappa * xi1 + f1 * xr1 - lam * xr2
    out[4] = p[I_OMEGA2] * p2
    out[5] = -p[I_OMEGA2] * q2 - gamma * p2 + g * (xr2 * xr2 + xi2 * xi2)
    out[6] = -kappa * xr2 - f2 * xi2 + drive + lam * xi1
    out[7] = -kappa * xi2 + f2 * xr2 - lam * xr1


@njit(cache=True, nogil=True)
def drift_matrix(out, p, s, t):
    """Fill ``out`` with the linear generator of the fluctuation dynamics."""
    g = p[I_G]
    gamma = p[I_GAMMA]
    kappa = p[I_KAPPA]
    lam = p[I_LAM]
    mod = 1.0 + p[I_AC] * math.cos(p[I_OMEGAC] * t)
    sq2g = math.sqrt(2.0) * g
    for i in range(DIM):
        for j in range(DIM):
            out[i, j] = 0.0
    for sub in range(2):
        o = 4 * sub
        delta = p[I_DELTA1] if sub == 0 else p[I_DELTA2]
        omega = p[I_OMEGA1] if sub == 0 else p[I_OMEGA2]
        q = s[o + 0]
        xr = s[o + 2]
        xi = s[o + 3]
        f = delta * mod + g * q
        out[o + 0, o + 1] = omega
        out[o + 1, o + 0] = -omega
        out[o + 1, o + 1] = -gamma
        out[o + 1, o + 2] = sq2g * xr
        out[o + 1, o + 3] = sq2g * xi
        out[o + 2, o + 0] = -sq2g * xi
        out[o + 2, o + 2] = -kappa
        out[o + 2, o + 3] = -f
        out[o + 3, o + 0] = sq2g * xr
        out[o + 3, o + 2] = f
        out[o + 3, o + 3] = -kappa
    # photon exchange only mixes the optical quadratures of the two cavities
    out[2, 7] = lam
    out[3, 6] = -lam
    out[6, 3] = lam
    out[7, 2] = -lam


@njit(cache=True, nogil=True)
def lyapunov_rhs(out, m, v, ndiag):
    """out = M V + V M^T + diag(ndiag)."""
    for i in range(DIM):
        for j in range(DIM):
            acc = 0.0
            for k in range(DIM):
                acc += m[i, k] * v[k, j] + v[i, k] * m[j, k]
            out[i, j] = acc
    for i in range(DIM):
        out[i, i] += ndiag[i]


@njit(cache=True, nogil=True)
def integrate(p, v0, ndiag, n_steps, dt, stride):
    """Advance mean field and covariance from t = 0 over ``n_steps`` steps.

    The mean field starts at the origin and the covariance at ``v0``.
    Samples are stored every ``stride`` steps (``n_steps`` must be a
    multiple of ``stride``); the covariance is symmetrized after each
    step to stop round-off drift.

    Returns ``(times, means, covs, fail_step)`` where ``fail_step`` is
    the 1-based step after which a non-finite entry first appeared, or
    -1 on success.
    """
    n_rec = n_steps // stride + 1
    times = np.empty(n_rec)
    means = np.empty((n_rec, DIM))
    covs = np.empty((n_rec, DIM, DIM))

    s = np.zeros(DIM)
    v = v0.copy()
    m = np.empty((DIM, DIM))
    k1 = np.empty(DIM)
    k2 = np.empty(DIM)
    k3 = np.empty(DIM)
    k4 = np.empty(DIM)
    kv1 = np.empty((DIM, DIM))
    kv2 = np.empty((DIM, DIM))
    kv3 = np.empty((DIM, DIM))
    kv4 = np.empty((DIM, DIM))
    stage_s = np.empty(DIM)
    stage_v = np.empty((DIM, DIM))

    times[0] = 0.0
    for i in range(DIM):
        means[0, i] = s[i]
        for j in range(DIM):
            covs[0, i, j] = v[i, j]
    rec = 1

    for step in range(n_steps):
        t = step * dt
        th = t + 0.5 * dt
        tf = t + dt

        mean_rhs(k1, p, s, t)
        drift_matrix(m, p, s, t)
        lyapunov_rhs(kv1, m, v, ndiag)

        for i in range(DIM):
            stage_s[i] = s[i] + 0.5 * dt * k1[i]
            for j in range(DIM):
                stage_v[i, j] = v[i, j] + 0.5 * dt * kv1[i, j]
        mean_rhs(k2, p, stage_s, th)
        drift_matrix(m, p, stage_s, th)
        lyapunov_rhs(kv2, m, stage_v, ndiag)

        for i in range(DIM):
            stage_s[i] = s[i] + 0.5 * dt * k2[i]
            for j in range(DIM):
                stage_v[i, j] = v[i, j] + 0.5 * dt * kv2[i, j]
        mean_rhs(k3, p, stage_s, th)
        drift_matrix(m, p, stage_s, th)
        lyapunov_rhs(kv3, m, stage_v, ndiag)

        for i in range(DIM):
            stage_s[i] = s[i] + dt * k3[i]
            for j in range(DIM):
                stage_v[i, j] = v[i, j] + dt * kv3[i, j]
        mean_rhs(k4, p, stage_s, tf)
        drift_matrix(m, p, stage_s, tf)
        lyapunov_rhs(kv4, m, stage_v, ndiag)

        total = 0.0
        for i in range(DIM):
            s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            total += s[i]
        for i in range(DIM):
            for j in range(DIM):
                v[i, j] += dt / 6.0 * (kv1[i, j] + 2.0 * kv2[i, j]
                                       + 2.0 * kv3[i, j] + kv4[i, j])
        for i in range(DIM):
            for j in range(i, DIM):
                sym = 0.5 * (v[i, j] + v[j, i])
                v[i, j] = sym
                v[j, i] = sym
                total += sym
        if not math.isfinite(total):
            return times[:rec], means[:rec], covs[:rec], step + 1

        if (step + 1) % stride == 0:
            times[rec] = (step + 1) * dt
            for i in range(DIM):
                means[rec, i] = s[i]
                for j in range(DIM):
                    covs[rec, i, j] = v[i, j]
            rec += 1

    return times, means, covs, -1
