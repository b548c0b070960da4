"""Numba-compiled integration core.

The optimizers evaluate hundreds of thousands of trajectories, so the RK4
loop lives here as plain-array code. Policy influences are precomputed for
every RK4 stage time with linear interpolation (the curves are zero at both
endpoints, so out-of-window lookups fall out correctly), then the stepping
loop only reads them.

Parameter vector layout (shared with simulate.py):
    0 c_r, 1 t_p, 2 c_dp, 3 p_qr, 4 p_qer, 5 i_lr, 6 i_r, 7 d_r,
    8 i_rr, 9 i_qrr
Economy vector layout:
    0 b_g, 1 p_i, 2 s_qi, 3 e_qi, 4 i_i, 5 i_qi
State vector layout:
    0 S, 1 Sq, 2 E, 3 Eq, 4 I, 5 Iq, 6 R, 7 GDP
"""

from __future__ import annotations

import numpy as np
from numba import njit

N_PARAMS = 10
PARAM_INDEX = {"c_r": 0, "t_p": 1, "c_dp": 2, "p_qr": 3, "p_qer": 4,
               "i_lr": 5, "i_r": 6, "d_r": 7, "i_rr": 8, "i_qrr": 9}
PROBABILITY_INDICES = (1, 2)


@njit(cache=True)
def _derivs(y, p, econ, out):
    s, s_q, e, e_q, i, i_q, r = y[0], y[1], y[2], y[3], y[4], y[5], y[6]
    c_r, t_p, c_dp = p[0], p[1], p[2]
    p_qr, p_qer, i_lr = p[3], p[4], p[5]
    i_r, d_r, i_rr, i_qrr = p[6], p[7], p[8], p[9]

    contact_quarantine = c_r * (1.0 - t_p) * c_dp * i * s
    contact_exposed = c_r * t_p * (1.0 - c_dp) * i * s
    contact_exposed_q = c_r * t_p * c_dp * i * s
    preventive_s = p_qr * s
    preventive_e = p_qr * e
    quarantine_end_s = p_qer * s_q
    quarantine_end_e = p_qer * e_q
    incubation = i_r * e
    incubation_q = i_r * e_q
    diagnosis = d_r * i
    recovery = i_rr * i
    recovery_q = i_qrr * i_q
    immunity_loss = i_lr * r

    out[0] = (-contact_quarantine - contact_exposed - contact_exposed_q
              - preventive_s + quarantine_end_s + immunity_loss)
    out[1] = contact_quarantine + preventive_s - quarantine_end_s
    out[2] = contact_exposed + quarantine_end_e - preventive_e - incubation
    out[3] = contact_exposed_q + preventive_e - quarantine_end_e - incubation_q
    out[4] = incubation - diagnosis - recovery
    out[5] = incubation_q + diagnosis - recovery_q
    out[6] = recovery + recovery_q - immunity_loss
    out[7] = econ[0] - econ[1] * (econ[2] * s_q + econ[3] * e_q
                                  + econ[4] * i + econ[5] * i_q)


@njit(cache=True)
def _stage_params(base, targets, triggers, curve_xs, curve_ys, dt, n_steps):
    """Effective parameter vector at every RK4 stage time.

    Stage times are 0, dt/2, dt, 3dt/2, ... (2*n_steps + 1 of them).
    Returns an array of shape (n_stages, N_PARAMS), clamped elementwise.
    """
    n_stages = 2 * n_steps + 1
    eff = np.empty((n_stages, base.shape[0]))
    for k in range(n_stages):
        for j in range(base.shape[0]):
            eff[k, j] = base[j]
    for ip in range(targets.shape[0]):
        j = targets[ip]
        xs = curve_xs[ip]
        ys = curve_ys[ip]
        m = xs.shape[0]
        pos = 0  # stage times are increasing, so sweep instead of bisecting
        for k in range(n_stages):
            t_rel = 0.5 * dt * k - triggers[ip]
            if t_rel <= xs[0] or t_rel >= xs[m - 1]:
                continue  # the curve vanishes outside its support
            while pos + 1 < m and xs[pos + 1] < t_rel:
                pos += 1
            frac = (t_rel - xs[pos]) / (xs[pos + 1] - xs[pos])
            eff[k, j] += ys[pos] + frac * (ys[pos + 1] - ys[pos])
        # only targeted parameters can leave their domain
        for k in range(n_stages):
            if eff[k, j] < 0.0:
                eff[k, j] = 0.0
            elif (j == 1 or j == 2) and eff[k, j] > 1.0:
                eff[k, j] = 1.0
    return eff


@njit(cache=True)
def _rk4_trajectory(y0, base, econ, targets, triggers, curve_xs, curve_ys,
                    dt, n_steps):
    """Full trajectory on the step grid; shape (n_steps + 1, 8).

    Returns (states, fail_step); fail_step >= 0 flags a non-finite state.
    """
    eff = _stage_params(base, targets, triggers, curve_xs, curve_ys, dt, n_steps)
    states = np.empty((n_steps + 1, 8))
    y = y0.copy()
    states[0] = y
    k1 = np.empty(8)
    k2 = np.empty(8)
    k3 = np.empty(8)
    k4 = np.empty(8)
    yt = np.empty(8)
    for step in range(n_steps):
        p0 = eff[2 * step]
        ph = eff[2 * step + 1]
        p1 = eff[2 * step + 2]
        _derivs(y, p0, econ, k1)
        for j in range(8):
            yt[j] = y[j] + 0.5 * dt * k1[j]
        _derivs(yt, ph, econ, k2)
        for j in range(8):
            yt[j] = y[j] + 0.5 * dt * k2[j]
        _derivs(yt, ph, econ, k3)
        for j in range(8):
            yt[j] = y[j] + dt * k3[j]
        _derivs(yt, p1, econ, k4)
        for j in range(8):
            y[j] = y[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        for j in range(7):
            if y[j] < 0.0:
                y[j] = 0.0
        for j in range(8):
            if not np.isfinite(y[j]):
                return states, step + 1
        states[step + 1] = y
    return states, -1


@njit(cache=True)
def _rk4_objectives(y0, base, econ, targets, triggers, curve_xs, curve_ys,
                    dt, n_steps):
    """Fast path: only the running peak of E+Eq+I+Iq and the GDP minimum.

    Returns (f1, f2, fail_step).
    """
    eff = _stage_params(base, targets, triggers, curve_xs, curve_ys, dt, n_steps)
    y = y0.copy()
    peak_infected = y[2] + y[3] + y[4] + y[5]
    gdp_min = y[7]
    k1 = np.empty(8)
    k2 = np.empty(8)
    k3 = np.empty(8)
    k4 = np.empty(8)
    yt = np.empty(8)
    for step in range(n_steps):
        p0 = eff[2 * step]
        ph = eff[2 * step + 1]
        p1 = eff[2 * step + 2]
        _derivs(y, p0, econ, k1)
        for j in range(8):
            yt[j] = y[j] + 0.5 * dt * k1[j]
        _derivs(yt, ph, econ, k2)
        for j in range(8):
            yt[j] = y[j] + 0.5 * dt * k2[j]
        _derivs(yt, ph, econ, k3)
        for j in range(8):
            yt[j] = y[j] + dt * k3[j]
        _derivs(yt, p1, econ, k4)
        for j in range(8):
            y[j] = y[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        for j in range(7):
            if y[j] < 0.0:
                y[j] = 0.0
        for j in range(8):
            if not np.isfinite(y[j]):
                return 0.0, 0.0, step + 1
        infected = y[2] + y[3] + y[4] + y[5]
        if infected > peak_infected:
            peak_infected = infected
        if y[7] < gdp_min:
            gdp_min = y[7]
    return peak_infected, -gdp_min, -1
