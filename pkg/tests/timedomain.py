"""Stochastic time-domain oracle for the covariance build.

Simulates the quadrature Langevin dynamics driven by white noise with an
Euler-Maruyama scheme, starting from the analytic stationary oscillator
state (2x2 Lyapunov solution), and accumulates the box-window output modes
over [-N tau, 0].  Entirely independent of the frequency-domain pipeline.
"""

from __future__ import annotations

import numpy as np


def stationary_bb(params, s_force_total):
    """Stationary (b1, b2) covariance under white total force noise."""
    sigma2 = s_force_total / (2.0 * params.gamma_m)
    return np.array([[sigma2, 0.0], [0.0, sigma2]])


def simulate_covariance(params, noise, input_state, basis, n_traj=10_000, dt=1e-3, seed=0):
    """Sample covariance of (b1(0), b2(0), modes) and its standard errors.

    Only white spectra and vacuum/fis inputs are supported (enough for the
    oracle configuration).  Returns (V_hat, V_se).
    """
    rng = np.random.default_rng(seed)
    wm, gm, wq, eta = params.omega_m, params.gamma_m, params.omega_q, params.eta
    g = wq / np.sqrt(wm)
    s_f = float(noise.force.evaluate(0.0))
    s_s = float(noise.sensing.evaluate(0.0))
    suu = input_state.spectrum(0.0)
    # white input: factor the 2x2 spectral matrix for correlated sampling
    chol_u = np.linalg.cholesky(suu + 1e-15 * np.eye(2))

    n, tau = basis.N, basis.tau
    steps_per_win = int(round(tau / dt))
    dt = tau / steps_per_win
    total_steps = n * steps_per_win

    b = rng.multivariate_normal(
        np.zeros(2), stationary_bb(params, g**2 * suu[0, 0] + s_f), size=n_traj).T
    b1, b2 = b[0].copy(), b[1].copy()

    modes = np.zeros((n, 2, n_traj))  # window k, quadrature, trajectory
    rt_dt = np.sqrt(dt)
    inv_rt_dt = 1.0 / rt_dt
    rt_eta, rt_loss = np.sqrt(eta), np.sqrt(1.0 - eta)

    # time runs from -N tau up to 0; window k covers [-k tau, -(k-1) tau)
    for step in range(total_steps):
        k = n - 1 - step // steps_per_win  # storage index: modes[0] is window 1
        xi = rng.standard_normal((2, n_traj))
        u = (chol_u @ xi) * inv_rt_dt
        nf = rng.standard_normal(n_traj) * np.sqrt(s_f) * inv_rt_dt
        ns = rng.standard_normal(n_traj) * np.sqrt(s_s) * inv_rt_dt if s_s > 0 else 0.0
        v1 = rt_eta * u[0]
        v2 = rt_eta * (u[1] + g * (b1 + ns))
        if eta < 1.0:
            l = rng.standard_normal((2, n_traj)) * inv_rt_dt
            v1 = v1 + rt_loss * l[0]
            v2 = v2 + rt_loss * l[1]
        w = dt / np.sqrt(tau)
        modes[k, 0] += w * v1
        modes[k, 1] += w * v2
        db2 = (-gm * b2 - wm * b1 + g * u[0] + nf) * dt
        db1 = wm * b2 * dt
        b1 += db1
        b2 += db2

    rows = [b1, b2] + [modes[k, c] for k in range(n) for c in range(2)]
    data = np.vstack(rows)
    dim = data.shape[0]
    v_hat = (data @ data.T) / n_traj
    # standard error of each second-moment estimate for Gaussian samples
    v_se = np.sqrt((np.outer(np.diag(v_hat), np.diag(v_hat)) + v_hat**2) / n_traj)
    return v_hat, v_se


def welch_psd(x, dt, nperseg):
    """Mean periodogram over non-overlapping segments; returns (omega, psd).

    Double-sided PSD in angular frequency under the e^{+i omega t} transform
    convention; used to pin the susceptibility sign convention.
    """
    nseg = len(x) // nperseg
    segs = x[: nseg * nperseg].reshape(nseg, nperseg)
    win = np.hanning(nperseg)
    norm = (win**2).sum() * dt
    spec = np.fft.rfft(segs * win, axis=1)
    psd = (np.abs(spec) ** 2).mean(axis=0) * dt**2 / norm
    omega = 2.0 * np.pi * np.fft.rfftfreq(nperseg, dt)
    return omega, psd
