"""Rational power spectral densities for stationary environmental noise.

Spectra are double-sided, symmetrized, real, even and nonnegative rational
functions of frequency.  Polynomials are stored in powers of Omega^2
(ascending), which makes evenness structural rather than a runtime check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize_scalar

__all__ = [
    "SpectrumError",
    "RationalSpectrum",
    "NoiseModel",
    "SqlReference",
    "white_force",
    "white_sensing",
    "displacement_referred_sum",
    "minimize_displacement_ratio",
]

# degree cap in Omega (i.e. 8 in Omega^2) and root tolerance for validation
_MAX_DEGREE = 16
_ROOT_TOL = 1e-10


class SpectrumError(ValueError):
    """Raised when a spectrum violates the rational-PSD contract."""


def _trim(coeffs):
    c = [float(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c)


def _real_nonneg_roots(coeffs):
    """Real roots z >= 0 of a polynomial in z = Omega^2 (companion matrix)."""
    c = np.asarray(coeffs, dtype=float)
    if len(c) <= 1:
        return np.empty(0)
    roots = npoly.polyroots(c)
    scale = 1.0 + np.abs(roots.real)
    real = roots[np.abs(roots.imag) <= _ROOT_TOL * scale]
    return np.sort(real.real[real.real >= -_ROOT_TOL])


@dataclass(frozen=True)
class RationalSpectrum:
    """S(Omega) = amplitude * P(Omega^2) / Q(Omega^2).

    ``numerator`` and ``denominator`` are coefficient tuples in ascending
    powers of Omega^2.  deg(Q) >= deg(P) in Omega is required for stability,
    Q must have no real roots, and S must be nonnegative on the real axis.
    """

    numerator: tuple
    denominator: tuple
    amplitude: float = 1.0

    def __post_init__(self):
        num = _trim(self.numerator)
        den = _trim(self.denominator)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)
        if self.amplitude < 0:
            raise SpectrumError("global amplitude must be nonnegative")
        if 2 * (len(num) - 1) > _MAX_DEGREE or 2 * (len(den) - 1) > _MAX_DEGREE:
            raise SpectrumError("polynomial degree exceeds cap of %d in Omega" % _MAX_DEGREE)
        if den == (0.0,):
            raise SpectrumError("denominator is identically zero")
        if not self.is_zero and len(num) > len(den):
            raise SpectrumError("deg(Q) >= deg(P) required for stability")
        # Q must be sign-definite on z >= 0; normalize it positive.
        if npoly.polyval(0.0, den) < 0:
            den = tuple(-c for c in den)
            num = tuple(-c for c in num)
            object.__setattr__(self, "numerator", num)
            object.__setattr__(self, "denominator", den)
        if len(_real_nonneg_roots(den)):
            raise SpectrumError("Q has a real root; spectrum is not finite on the real axis")
        if npoly.polyval(0.0, den) <= 0:
            raise SpectrumError("Q is negative on the real axis")
        self._check_nonnegative(num)

    @staticmethod
    def _check_nonnegative(num):
        # P may touch zero but must not cross it for z >= 0.
        roots = _real_nonneg_roots(num)
        probes = [0.0, 1.0]
        probes += list(np.clip(roots, 0.0, None) * 0.5)
        for lo, hi in zip(roots[:-1], roots[1:]):
            probes.append(0.5 * (lo + hi))
        if len(roots):
            probes.append(2.0 * roots[-1] + 1.0)
        vals = npoly.polyval(np.asarray(probes), np.asarray(num, dtype=float))
        scale = max(1.0, float(np.max(np.abs(np.asarray(num)))))
        if np.any(vals < -_ROOT_TOL * scale):
            raise SpectrumError("P changes sign on the real axis; S(Omega) < 0 somewhere")

    @property
    def is_zero(self):
        return self.amplitude == 0.0 or self.numerator == (0.0,)

    def evaluate(self, omega):
        """S(Omega); accepts scalars or arrays, exactly even in Omega."""
        z = np.square(np.asarray(omega, dtype=float))
        num = np.asarray(self.numerator, dtype=float)
        den = np.asarray(self.denominator, dtype=float)
        out = self.amplitude * npoly.polyval(z, num) / npoly.polyval(z, den)
        return out if out.ndim else float(out)

    __call__ = evaluate

    def scaled(self, factor):
        """Spectrum with the global amplitude multiplied by ``factor`` >= 0."""
        if factor < 0:
            raise SpectrumError("scale factor must be nonnegative")
        return RationalSpectrum(self.numerator, self.denominator, self.amplitude * factor)

    def high_frequency_limit(self):
        """lim_{Omega -> inf} S(Omega) (zero when deg Q > deg P)."""
        if self.is_zero or len(self.numerator) < len(self.denominator):
            return 0.0
        return self.amplitude * self.numerator[-1] / self.denominator[-1]


def zero_spectrum():
    return RationalSpectrum((0.0,), (1.0,), 0.0)


def constant_spectrum(value):
    if value < 0:
        raise SpectrumError("constant spectrum must be nonnegative")
    return RationalSpectrum((1.0,), (1.0,), float(value))


def white_force(omega_F, omega_m):
    """White force-noise spectrum 2*Omega_F^2/omega_m."""
    if omega_F <= 0:
        raise SpectrumError("Omega_F must be positive (force noise cannot vanish)")
    if omega_m <= 0:
        raise SpectrumError("omega_m must be positive")
    return constant_spectrum(2.0 * omega_F**2 / omega_m)


def white_sensing(omega_S, omega_m):
    """White sensing-noise spectrum 2*omega_m/Omega_S^2; Omega_S=inf means none."""
    if omega_S < 0:
        raise SpectrumError("Omega_S must be positive or +inf")
    if omega_S == 0:
        raise SpectrumError("Omega_S = 0 would mean infinite sensing noise")
    if omega_m <= 0:
        raise SpectrumError("omega_m must be positive")
    if math.isinf(omega_S):
        return zero_spectrum()
    return constant_spectrum(2.0 * omega_m / omega_S**2)


@dataclass(frozen=True)
class NoiseModel:
    """Force and sensing noise spectra, with corner frequencies when white."""

    force: RationalSpectrum
    sensing: RationalSpectrum
    omega_F: float | None = None
    omega_S: float | None = None

    @classmethod
    def white(cls, omega_F, omega_S, omega_m):
        return cls(
            force=white_force(omega_F, omega_m),
            sensing=white_sensing(omega_S, omega_m),
            omega_F=float(omega_F),
            omega_S=float(omega_S),
        )

    @property
    def has_corners(self):
        return self.omega_F is not None and self.omega_S is not None

    def with_sensing_scaled(self, beta):
        return NoiseModel(self.force, self.sensing.scaled(beta), self.omega_F, None)


@dataclass(frozen=True)
class SqlReference:
    """Free-mass standard quantum limit S_SQL(Omega) = 2*hbar/(M*Omega^2)."""

    mass: float = 1.0
    hbar: float = 1.0
    omega_m: float = 1.0

    def __post_init__(self):
        if self.mass <= 0 or self.hbar <= 0 or self.omega_m <= 0:
            raise SpectrumError("mass, hbar and omega_m must be positive")

    def value(self, omega):
        return 2.0 * self.hbar / (self.mass * np.square(np.asarray(omega, dtype=float)))


def displacement_referred_sum(noise, sql, omega, include_force=True, include_sensing=True):
    """Total environmental displacement noise over the free-mass SQL.

    The force term is referred through the free-mass response (amplitude
    ~ Omega^-2), the sensing term directly; for white noise models this is
    Omega_F^2/Omega^2 + Omega^2/Omega_S^2.
    """
    if not noise.has_corners:
        raise SpectrumError("displacement referral requires a white noise model with corners")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise SpectrumError("Omega must be positive")
    wm = sql.omega_m
    total = np.zeros_like(omega)
    if include_force:
        total = total + noise.force.evaluate(omega) * wm / (2.0 * omega**2)
    if include_sensing:
        total = total + noise.sensing.evaluate(omega) * omega**2 / (2.0 * wm)
    return total if total.ndim else float(total)


def minimize_displacement_ratio(noise, sql, bracket_decades=4.0):
    """Minimize the SQL-referred sum over Omega (golden-section on log Omega).

    Returns (omega_min, ratio_min).
    """
    center = math.sqrt(noise.omega_F * (noise.omega_S if math.isfinite(noise.omega_S) else noise.omega_F))
    lo, hi = math.log(center) - bracket_decades, math.log(center) + bracket_decades

    def objective(x):
        return displacement_referred_sum(noise, sql, math.exp(x))

    res = minimize_scalar(objective, bracket=(lo, 0.5 * (lo + hi), hi), method="golden",
                          options={"xtol": 1e-12})
    return math.exp(res.x), float(res.fun)
