"""Finite covariance matrix of the oscillator plus windowed output modes.

The continuum of reflected-light modes on t < 0 is discretized by N
orthonormal box windows of duration tau.  Covariance entries are frequency
integrals of the cross-spectral matrix weighted by window transforms; the
oscillatory factors e^{i Omega sigma} are handled by a Filon-type rule
(piecewise-linear interpolation of the smooth part, exact integration of
the oscillation), so one frequency grid serves every window index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .plant import cross_spectral_matrix, output_high_frequency_limit

__all__ = [
    "TemporalModeBasis",
    "QuadratureSettings",
    "CovarianceMatrix",
    "NumericalFailure",
    "window_fourier",
    "build_covariance",
    "symplectic_form",
]

PHYSICALITY_EPS = 1e-6


class NumericalFailure(ArithmeticError):
    """A covariance build or verdict failed its numerical sanity checks."""


@dataclass(frozen=True)
class TemporalModeBasis:
    """N orthonormal box windows f_k(t) = tau^{-1/2} on [-k tau, -(k-1) tau)."""

    N: int
    tau: float
    window: str = "box"

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("mode count N must be positive")
        if self.tau <= 0:
            raise ValueError("window duration tau must be positive")
        if self.window != "box":
            raise ValueError("only box windows are supported")

    @classmethod
    def auto(cls, params, noise, N=128):
        """Default basis: 1/tau resolves the fastest corner frequency."""
        corners = [params.omega_m]
        if noise.omega_F is not None:
            corners.append(noise.omega_F)
        if noise.omega_S is not None and math.isfinite(noise.omega_S):
            corners.append(noise.omega_S)
        return cls(N=N, tau=1.0 / (4.0 * max(corners)))

    def centers(self):
        """Window center times, t_k = -(k - 1/2) tau for k = 1..N."""
        return -(np.arange(1, self.N + 1) - 0.5) * self.tau

    def doubled(self):
        return TemporalModeBasis(N=2 * self.N, tau=self.tau, window=self.window)


def window_fourier(k, omega, basis):
    """Fourier transform of window k under the e^{+i Omega t} convention."""
    if not 1 <= k <= basis.N:
        raise ValueError("window index k out of range")
    omega = np.asarray(omega, dtype=float)
    tau = basis.tau
    envelope = math.sqrt(tau) * np.sinc(omega * tau / (2.0 * np.pi))
    return envelope * np.exp(-1j * omega * (k - 0.5) * tau)


@dataclass(frozen=True)
class QuadratureSettings:
    """Frequency grid for the covariance integrals.

    The grid is the union of a log-spaced backbone, a uniform component
    dense enough to resolve the window sinc envelope, and linear refinement
    windows around sharp spectral features (the mechanical resonance and
    any filter-cavity poles).  ``points_per_decade`` scales every component,
    so doubling it doubles the density of the whole grid.
    """

    omega_max: float
    points_per_decade: int = 200
    refinement_windows: tuple = ()

    def __post_init__(self):
        if self.omega_max <= 0:
            raise ValueError("omega_max must be positive")
        if self.points_per_decade < 10:
            raise ValueError("points_per_decade too small")

    @classmethod
    def auto(cls, params, noise, input_state, basis, points_per_decade=200, safety=12.0):
        scales = [params.omega_m, 1.0 / basis.tau, params.omega_q**2 / params.omega_m]
        if noise.omega_F is not None:
            scales.append(noise.omega_F)
        if noise.omega_S is not None and math.isfinite(noise.omega_S):
            scales.append(noise.omega_S)
        windows = []
        if params.gamma_m > 0:
            windows.append((params.omega_m, params.gamma_m))
        if input_state.kind == "fds":
            windows.append((abs(input_state.delta), input_state.gamma_f))
        return cls(
            omega_max=safety * max(scales),
            points_per_decade=points_per_decade,
            refinement_windows=tuple(windows),
        )

    def grid(self, basis):
        """Ascending frequency grid on [0, omega_max]."""
        ppd = self.points_per_decade
        tau = basis.tau
        parts = [np.array([0.0])]
        # uniform component: ~ppd/5 points per sinc half-period pi/tau
        du = 5.0 * np.pi / (tau * ppd)
        n_uniform = int(np.ceil(self.omega_max / du))
        parts.append(np.linspace(0.0, self.omega_max, n_uniform + 1))
        # log backbone over every decade with structure
        lo = min(w - 0.5 * width for w, width in self.refinement_windows) if self.refinement_windows else 1.0
        lo = max(min(lo, 1.0 / (basis.N * tau), self.omega_max / 1e8), self.omega_max * 1e-12)
        n_log = max(2, int(np.ceil(np.log10(self.omega_max / lo) * ppd)))
        parts.append(np.geomspace(lo, self.omega_max, n_log))
        # refinement: a linear core with >= 50 points per feature width at the
        # default density, plus log-spaced offsets resolving the resonance tails
        for center, width in self.refinement_windows:
            core = np.linspace(-2.0 * width, 2.0 * width, max(8, ppd // 2) + 1)
            n_tail = max(8, int(np.ceil(np.log10(500.0) * ppd / 5)))
            tail = width * np.geomspace(2.0, 1000.0, n_tail)
            offsets = np.concatenate([core, tail, -tail])
            pts = center + offsets
            parts.append(pts[(pts >= 0.0) & (pts <= self.omega_max)])
        grid = np.unique(np.concatenate(parts))
        return grid[(grid >= 0.0) & (grid <= self.omega_max)]


@dataclass(frozen=True)
class CovarianceMatrix:
    """Sym. covariance of (b1, b2, mode-1 amp, mode-1 phase, ...) plus its form K."""

    V: np.ndarray
    K: np.ndarray
    basis: TemporalModeBasis
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_modes(self):
        return self.basis.N

    def bb(self):
        return self.V[:2, :2]

    def bv(self):
        return self.V[:2, 2:]

    def vv(self):
        return self.V[2:, 2:]

    def to_text(self):
        """Plain-text export: ordering header, then one row per line."""
        lines = ["# covariance matrix, ordering: b1 b2 " +
                 " ".join("v%d_1 v%d_2" % (k, k) for k in range(1, self.basis.N + 1)),
                 "# N=%d tau=%.17g" % (self.basis.N, self.basis.tau)]
        for row in self.V:
            lines.append(" ".join("%.17g" % x for x in row))
        return "\n".join(lines) + "\n"


def symplectic_form(n_modes_total):
    """Block-diagonal [[0, 1], [-1, 0]] form for n_modes_total modes."""
    k = np.zeros((2 * n_modes_total, 2 * n_modes_total))
    for i in range(n_modes_total):
        k[2 * i, 2 * i + 1] = 1.0
        k[2 * i + 1, 2 * i] = -1.0
    return k


def _filon_weights(grid, sigma):
    """Node weights w_j such that sum_j w_j g_j ~ int g(w) e^{i w sigma} dw.

    Piecewise-linear interpolation of g on the grid; the oscillatory factor
    is integrated exactly per segment, which stays accurate for arbitrarily
    large sigma.
    """
    a = grid[:-1]
    h = np.diff(grid)
    x = sigma * h
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)  # placeholder to avoid 0/0
    eix = np.exp(1j * xs)
    phi0 = (eix - 1.0) / (1j * xs)
    phi1 = eix / (1j * xs) - (eix - 1.0) / (1j * xs) ** 2
    if np.any(small):
        xsm = x[small]
        phi0[small] = 1.0 + 1j * xsm / 2.0 - xsm**2 / 6.0 - 1j * xsm**3 / 24.0
        phi1[small] = 0.5 + 1j * xsm / 3.0 - xsm**2 / 8.0 - 1j * xsm**3 / 30.0
    pref = h * np.exp(1j * sigma * a)
    w_left = pref * (phi0 - phi1)
    w_right = pref * phi1
    weights = np.zeros(len(grid), dtype=complex)
    weights[:-1] += w_left
    weights[1:] += w_right
    return weights


def build_covariance(params, noise, input_state, basis, quad=None):
    """Covariance matrix of (b1, b2) and N windowed output modes.

    The constant high-frequency part of the output spectrum is handled
    analytically (it contributes delta_kl by window orthonormality); only
    the decaying remainder is integrated numerically.
    """
    if params.gamma_m <= 0:
        raise ValueError("the oscillator must be damped (gamma_m > 0) for a steady state")
    if quad is None:
        quad = QuadratureSettings.auto(params, noise, input_state, basis)
    grid = quad.grid(basis)
    tau, n = basis.tau, basis.N

    s = cross_spectral_matrix(grid, params, noise, input_state)
    s_inf = output_high_frequency_limit(params, noise, input_state)
    r = s.copy()
    r[:, 2:, 2:] -= s_inf

    # convergence diagnostic: the remainder must have decayed by omega_max
    tail = np.max(np.abs(r[int(0.95 * len(grid)):]), axis=(0, 1, 2))
    peak = np.max(np.abs(r))
    if peak > 0 and tail > 1e-2 * peak:
        raise NumericalFailure(
            "spectral remainder has not decayed by omega_max=%g (tail/peak=%.2e); "
            "the covariance integrals do not converge on this grid" % (quad.omega_max, tail / peak))

    sincv = np.sinc(grid * tau / (2.0 * np.pi))
    inv_pi = 1.0 / np.pi

    dim = 2 * n + 2
    v = np.zeros((dim, dim))

    # (b, b) block: sigma = 0
    w0 = _filon_weights(grid, 0.0)
    for a in range(2):
        for c in range(2):
            v[a, c] = inv_pi * np.real(w0 @ r[:, a, c])

    # (b, mode-k) blocks: smooth part S_bv * sqrt(tau) * sinc, sigma_k = -(k-1/2) tau
    g_bv = r[:, :2, 2:] * (math.sqrt(tau) * sincv)[:, None, None]
    for k in range(1, n + 1):
        w = _filon_weights(grid, -(k - 0.5) * tau)
        col = 2 * k
        for a in range(2):
            for c in range(2):
                v[a, col + c] = inv_pi * np.real(w @ g_bv[:, a, c])

    # mode-mode Toeplitz blocks: smooth part (S_vv - S_inf) * tau * sinc^2
    g_vv = r[:, 2:, 2:] * (tau * sincv**2)[:, None, None]
    blocks = np.empty((n, 2, 2))
    for d in range(n):
        w = _filon_weights(grid, d * tau)
        for a in range(2):
            for c in range(2):
                blocks[d, a, c] = inv_pi * np.real(w @ g_vv[:, a, c])
    blocks[0] += s_inf  # exact delta_kl term from window orthonormality

    for k in range(n):
        rk = 2 + 2 * k
        for l in range(n):
            cl = 2 + 2 * l
            d = k - l
            v[rk:rk + 2, cl:cl + 2] = blocks[d] if d >= 0 else blocks[-d].T

    asym = np.max(np.abs(v - v.T))
    v = 0.5 * (v + v.T)

    k_form = symplectic_form(n + 1)
    norm = float(np.max(np.abs(np.linalg.eigvalsh(v))))
    phys = np.linalg.eigvalsh(v + 1j * k_form)
    min_phys = float(phys[0])
    diagnostics = {
        "grid_points": int(len(grid)),
        "omega_max": float(quad.omega_max),
        "points_per_decade": int(quad.points_per_decade),
        "asymmetry": float(asym),
        "norm": norm,
        "min_physicality_eig": min_phys,
    }
    if min_phys < -PHYSICALITY_EPS * norm:
        raise NumericalFailure(
            "covariance violates V + iK >= 0 beyond tolerance "
            "(min eig %.3e vs -%.3e)" % (min_phys, PHYSICALITY_EPS * norm))
    return CovarianceMatrix(V=v, K=k_form, basis=basis, diagnostics=diagnostics)
