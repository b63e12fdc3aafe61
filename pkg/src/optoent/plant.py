"""Frequency-domain transfer functions of the probed oscillator.

The Fourier convention is x(Omega) = int x(t) e^{i Omega t} dt, so stable
responses have their poles in the lower half-plane and d/dt maps to
-i Omega.  Inputs are ordered (u1, u2, n_F, n_S) plus an optional loss
vacuum (l1, l2) when the detection efficiency eta < 1; outputs are the
oscillator quadratures (b1, b2) and the reflected field (v1, v2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PlantParams",
    "TransferMatrices",
    "PoleError",
    "susceptibility",
    "transfer",
    "cross_spectral_matrix",
    "spectral_density",
]


class PoleError(ArithmeticError):
    """Undamped oscillator evaluated exactly on resonance."""


@dataclass(frozen=True)
class PlantParams:
    omega_m: float
    gamma_m: float
    omega_q: float
    eta: float = 1.0

    def __post_init__(self):
        if self.omega_m <= 0:
            raise ValueError("omega_m must be positive")
        if self.gamma_m < 0:
            raise ValueError("gamma_m must be nonnegative")
        if self.omega_q < 0:
            raise ValueError("omega_q must be nonnegative")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")

    @property
    def lossy(self):
        return self.eta < 1.0

    def input_labels(self):
        labels = ("u1", "u2", "n_F", "n_S")
        return labels + (("l1", "l2") if self.lossy else ())


@dataclass(frozen=True)
class TransferMatrices:
    """Responses at one (or a batch of) frequencies.

    ``oscillator`` maps the inputs to (b1, b2) and ``output`` maps them to
    (v1, v2); both have shape (..., 2, n_inputs), complex.
    """

    oscillator: np.ndarray
    output: np.ndarray
    labels: tuple


def susceptibility(omega, params):
    """Mechanical response chi(Omega) = omega_m / (omega_m^2 - Omega^2 - i gamma_m Omega)."""
    omega = np.asarray(omega, dtype=float)
    wm, gm = params.omega_m, params.gamma_m
    den = wm**2 - omega**2 - 1j * gm * omega
    if gm == 0.0 and np.any(np.abs(np.abs(omega) - wm) == 0.0):
        raise PoleError("undamped susceptibility evaluated on resonance")
    out = wm / den
    return out if out.ndim else complex(out)


def transfer(omega, params):
    """Transfer matrices from (u1, u2, n_F, n_S[, l1, l2]) to (b1, b2) and (v1, v2)."""
    omega = np.asarray(omega, dtype=float)
    chi = np.asarray(susceptibility(omega, params))
    wm, wq, eta = params.omega_m, params.omega_q, params.eta
    g = wq / np.sqrt(wm)
    n_in = 6 if params.lossy else 4
    shape = omega.shape

    osc = np.zeros(shape + (2, n_in), dtype=complex)
    osc[..., 0, 0] = chi * g          # b1 <- u1
    osc[..., 0, 2] = chi              # b1 <- n_F
    osc[..., 1, :] = (-1j * omega / wm)[..., None] * osc[..., 0, :]

    out = np.zeros(shape + (2, n_in), dtype=complex)
    rt_eta, rt_loss = np.sqrt(eta), np.sqrt(1.0 - eta)
    out[..., 0, 0] = rt_eta           # v1 <- u1
    out[..., 1, 1] = rt_eta           # v2 <- u2
    out[..., 1, :] += rt_eta * g * osc[..., 0, :]
    out[..., 1, 3] += rt_eta * g      # v2 <- n_S (measured alongside b1)
    if params.lossy:
        out[..., 0, 4] = rt_loss
        out[..., 1, 5] = rt_loss
    return TransferMatrices(oscillator=osc, output=out, labels=params.input_labels())


def _input_blocks(omega, params, noise, input_state):
    """Diagonal-block input spectral matrix D(Omega), shape (..., n, n)."""
    omega = np.asarray(omega, dtype=float)
    n_in = 6 if params.lossy else 4
    d = np.zeros(omega.shape + (n_in, n_in), dtype=float)
    d[..., :2, :2] = input_state.spectrum(omega)
    d[..., 2, 2] = noise.force.evaluate(omega)
    d[..., 3, 3] = noise.sensing.evaluate(omega)
    if params.lossy:
        d[..., 4, 4] = 1.0
        d[..., 5, 5] = 1.0
    return d


def cross_spectral_matrix(omega, params, noise, input_state):
    """Hermitian cross-spectral matrix of (b1, b2, v1, v2), shape (..., 4, 4).

    The covariance integrals need the full complex matrix; the symmetrized
    (real) spectral density is its real part.
    """
    tm = transfer(omega, params)
    t = np.concatenate([tm.oscillator, tm.output], axis=-2)
    d = _input_blocks(omega, params, noise, input_state)
    s = t @ d @ np.conj(np.swapaxes(t, -1, -2))
    return 0.5 * (s + np.conj(np.swapaxes(s, -1, -2)))


def spectral_density(omega, params, noise, input_state):
    """Symmetrized spectral-density matrix of (b1, b2, v1, v2), real PSD."""
    return cross_spectral_matrix(omega, params, noise, input_state).real


def output_high_frequency_limit(params, noise, input_state):
    """Analytic Omega -> inf limit of the (v1, v2) block of the spectrum."""
    eta = params.eta
    suu = input_state.high_frequency_spectrum()
    s_inf = eta * suu.copy()
    s_inf[1, 1] += eta * params.omega_q**2 / params.omega_m * noise.sensing.high_frequency_limit()
    s_inf += (1.0 - eta) * np.eye(2)
    return s_inf
