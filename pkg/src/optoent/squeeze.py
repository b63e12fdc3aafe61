"""Input-field spectral densities: vacuum, squeezed, and cavity-filtered light.

The 2x2 matrix S_uu(Omega) is the symmetrized spectral density of the input
amplitude/phase quadratures, normalized so that the vacuum is the identity.
Frequency-dependent squeezing is frequency-independent squeezing reflected
off a lossless, detuned, single-pole cavity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InputFieldState",
    "input_spectrum",
    "filter_transfer",
    "squeezed_quantum_noise_spectrum",
    "autotune_filter",
]


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class InputFieldState:
    """Stationary Gaussian input field.

    kind is one of "vacuum", "fis" (frequency-independent squeezing) or
    "fds" (frequency-dependent squeezing via a detuned filter cavity with
    half-bandwidth gamma_f and detuning delta).
    """

    kind: str = "vacuum"
    r: float = 0.0
    theta: float = 0.0
    gamma_f: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("vacuum", "fis", "fds"):
            raise ValueError("unknown input field kind %r" % (self.kind,))
        if self.r < 0:
            raise ValueError("squeeze factor r must be nonnegative")
        if self.kind == "fds" and self.gamma_f <= 0:
            raise ValueError("filter cavity half-bandwidth gamma_f must be positive")

    @classmethod
    def vacuum(cls):
        return cls("vacuum")

    @classmethod
    def squeezed(cls, r, theta=0.0):
        return cls("fis", r=r, theta=theta)

    @classmethod
    def filtered(cls, r, theta, gamma_f, delta):
        return cls("fds", r=r, theta=theta, gamma_f=gamma_f, delta=delta)

    def _fis_matrix(self):
        rot = _rotation(self.theta)
        return rot @ np.diag([math.exp(-2.0 * self.r), math.exp(2.0 * self.r)]) @ rot.T

    def spectrum(self, omega):
        """S_uu(Omega) as (..., 2, 2) real symmetric; identity for vacuum."""
        omega = np.asarray(omega, dtype=float)
        shape = omega.shape + (2, 2)
        if self.kind == "vacuum" or self.r == 0.0:
            return np.broadcast_to(np.eye(2), shape).copy()
        base = self._fis_matrix()
        if self.kind == "fis":
            return np.broadcast_to(base, shape).copy()
        a = filter_transfer(omega, self.gamma_f, self.delta)
        out = a @ base @ np.conj(np.swapaxes(a, -1, -2))
        return out.real

    def high_frequency_spectrum(self):
        """Limit of S_uu as Omega -> inf (the cavity response flattens out)."""
        if self.kind == "vacuum" or self.r == 0.0:
            return np.eye(2)
        return self._fis_matrix()


def input_spectrum(omega, state):
    """Symmetrized input spectral density S_uu(Omega), (..., 2, 2)."""
    return state.spectrum(omega)


def filter_transfer(omega, gamma_f, delta):
    """Two-photon quadrature transfer matrix A(Omega) of the filter cavity.

    A = T diag(rho(Omega), rho*(-Omega)) T^-1 with the lossless single-pole
    reflection rho(Omega) = (gamma_f/2 + i(Omega-delta))/(gamma_f/2 - i(Omega-delta))
    and T mapping quadratures to sidebands.  |det A| = 1 at every Omega and
    all poles sit in the lower half-plane.
    """
    if gamma_f <= 0:
        raise ValueError("gamma_f must be positive")
    omega = np.asarray(omega, dtype=float)
    half = 0.5 * gamma_f

    def rho(x):
        return (half + 1j * x) / (half - 1j * x)

    p = rho(omega - delta)            # upper sideband
    m = np.conj(rho(-omega - delta))  # lower sideband, conjugated
    a = np.empty(omega.shape + (2, 2), dtype=complex)
    a[..., 0, 0] = 0.5 * (p + m)
    a[..., 0, 1] = 0.5j * (p - m)
    a[..., 1, 0] = 0.5j * (m - p)
    a[..., 1, 1] = 0.5 * (p + m)
    return a


def squeezed_quantum_noise_spectrum(params, state, omega):
    """Quantum-noise-only output phase-quadrature spectrum (no n_F, n_S).

    This is the shot-noise plus back-action spectrum of v2, used by the
    figure pipeline and the filter autotuner; 1 is the shot-noise floor.
    """
    from .plant import susceptibility

    omega = np.asarray(omega, dtype=float)
    chi = susceptibility(omega, params)
    kappa = params.omega_q**2 / params.omega_m * chi  # u1 -> v2 transduction
    suu = state.spectrum(omega)
    eta = params.eta
    out = (
        np.abs(kappa) ** 2 * suu[..., 0, 0]
        + suu[..., 1, 1]
        + 2.0 * np.real(kappa) * suu[..., 0, 1]
    )
    out = eta * out + (1.0 - eta)
    return out if out.ndim else float(out)


def autotune_filter(params, r, band, theta=0.5 * math.pi, n_points=96):
    """Choose (gamma_f, delta) minimizing the integrated quantum noise.

    Golden-section search on log|delta| over a log-spaced frequency band,
    for both detuning signs and bandwidth/detuning ratios 1 and 2 (the
    free-mass optimum sits at gamma_f = 2|delta|).  Deterministic, so
    figures built on top of it are reproducible.  Returns the tuned fds
    InputFieldState.
    """
    from scipy.optimize import minimize_scalar

    lo, hi = band
    if not (0 < lo < hi):
        raise ValueError("autotune band must satisfy 0 < lo < hi")
    grid = np.geomspace(lo, hi, n_points)
    log_w = np.log(grid)

    def cost(log_mag, sign, ratio):
        mag = math.exp(log_mag)
        state = InputFieldState.filtered(r, theta, gamma_f=ratio * mag, delta=sign * mag)
        s = squeezed_quantum_noise_spectrum(params, state, grid)
        return float(np.trapezoid(np.log(s), log_w))

    center = math.log(math.sqrt(lo * hi))
    span = 0.5 * math.log(hi / lo) + math.log(10.0)
    best = None
    for sign in (-1.0, 1.0):
        for ratio in (1.0, 2.0):
            res = minimize_scalar(
                cost, args=(sign, ratio),
                bracket=(center - span, center, center + span),
                method="golden", options={"xtol": 1e-10},
            )
            if best is None or res.fun < best[0]:
                best = (res.fun, sign * math.exp(res.x), ratio * math.exp(res.x))
    _, delta, gamma_f = best
    return InputFieldState.filtered(r, theta, gamma_f=gamma_f, delta=delta)
