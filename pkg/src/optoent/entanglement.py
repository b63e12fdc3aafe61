"""Separability of the oscillator/output-field Gaussian state.

Two independent routes decide the same question: the PPT symplectic
spectrum of the partially transposed covariance matrix, and the sign of a
2x2 Schur-complement determinant obtained by causally inverting the
output-field block (the discretized analog of a half-line inversion; the
basis lives on t < 0, so causality is inherited from the discretization).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covariance import CovarianceMatrix, NumericalFailure

__all__ = [
    "PpTolerances",
    "EntanglementVerdict",
    "partial_transpose",
    "symplectic_spectrum",
    "ppt_verdict",
    "schur_indicator",
    "log_negativity",
]


@dataclass(frozen=True)
class PpTolerances:
    eps_ppt: float = 1e-4        # indeterminate band around nu = 1
    eps_imag: float = 1e-8       # allowed relative imaginary part of det
    cond_fallback: float = 1e8   # switch to the Williamson square-root route


@dataclass(frozen=True)
class EntanglementVerdict:
    nu_min: float
    log_negativity: float
    schur_indicator: float
    entangled: bool
    indeterminate: bool
    diagnostics: dict = field(default_factory=dict)


def partial_transpose(cov):
    """Covariance of the partially transposed state: b2 -> -b2."""
    v = cov.V.copy()
    v[1, :] *= -1.0
    v[:, 1] *= -1.0
    return CovarianceMatrix(V=v, K=cov.K, basis=cov.basis, diagnostics=dict(cov.diagnostics))


def _sympl_eigs_direct(v, k):
    # K^-1 = -K for this form; numpy balances before the QR iteration
    eig = np.linalg.eigvals(-k @ v)
    return np.abs(eig)


def _sympl_eigs_williamson(v, k):
    # |eig(K^-1 V)| via the Hermitian matrix i V^{1/2} K V^{1/2}
    w, u = np.linalg.eigh(v)
    w = np.clip(w, 0.0, None)
    root = (u * np.sqrt(w)) @ u.T
    m = 1j * (root @ k @ root)
    return np.abs(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))


def symplectic_spectrum(v, k, cond_fallback=1e8):
    """Symplectic eigenvalues of a symmetric matrix, ascending, pairs collapsed."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != v.shape[1] or not np.allclose(v, v.T, atol=1e-8 * (1 + np.abs(v).max())):
        raise ValueError("symplectic spectrum requires a symmetric matrix")
    ew = np.linalg.eigvalsh(v)
    cond = abs(ew[-1]) / max(abs(ew[0]), np.finfo(float).tiny)
    if cond > cond_fallback:
        nus = _sympl_eigs_williamson(v, k)
    else:
        nus = _sympl_eigs_direct(v, k)
    nus = np.sort(nus)
    return 0.5 * (nus[0::2] + nus[1::2])  # collapse the +/- pairs


def log_negativity(cov, tol=None):
    """E_N = max(0, -ln nu_min) over the partial transpose."""
    tol = tol or PpTolerances()
    nus = symplectic_spectrum(partial_transpose(cov).V, cov.K, tol.cond_fallback)
    return max(0.0, -math.log(float(nus[0])))


def schur_indicator(cov, tol=None):
    """det[(V_pt^bb + iK^b) - V_pt^bv (V^vv + iK^v)^-1 V_pt^vb], a real number.

    Negative exactly when the state is entangled.  The v-block inversion is
    performed on the t < 0 temporal-mode basis, the discretized form of a
    causal half-line inversion.
    """
    tol = tol or PpTolerances()
    value, _ = _schur_indicator_impl(cov, tol)
    return value


def _schur_indicator_impl(cov, tol):
    kb = np.array([[0.0, 1.0], [-1.0, 0.0]])
    kv = cov.K[2:, 2:]
    vvv = cov.vv() + 1j * kv

    ew = np.linalg.eigvalsh(vvv)
    scale_vv = max(float(ew[-1]), np.finfo(float).tiny)
    if ew[0] <= 1e-12 * scale_vv:
        raise NumericalFailure(
            "output-field block V^vv + iK^v is singular (min eig %.3e); "
            "the Schur route is undefined here" % float(ew[0]))
    cond = float(ew[-1] / ew[0])

    vpt = partial_transpose(cov)
    bv = vpt.bv().astype(complex)
    x = np.linalg.solve(vvv, bv.T)  # V_pt^vb = (V_pt^bv)^T
    m = (vpt.bb() + 1j * kb) - bv @ x
    det = complex(np.linalg.det(m))
    scale = 1.0 + float(np.abs(m).max()) ** 2
    if abs(det.imag) > tol.eps_imag * max(abs(det.real), scale):
        raise NumericalFailure(
            "Schur determinant has a non-real part beyond tolerance "
            "(det = %r)" % (det,))
    return det.real, cond


def ppt_verdict(cov, tol=None, with_schur=True):
    """Full separability verdict; the PPT and Schur routes must agree.

    At most one symplectic eigenvalue of the partial transpose may fall
    below 1 in the 1xN configuration; more than one signals a numerics bug.
    A singular v-block (e.g. omega_q = 0, where the state is trivially
    separable) skips the Schur route and is recorded in the diagnostics.
    """
    tol = tol or PpTolerances()
    vpt = partial_transpose(cov)
    nus = symplectic_spectrum(vpt.V, cov.K, tol.cond_fallback)
    nu_min = float(nus[0])
    below = int(np.sum(nus < 1.0 - tol.eps_ppt))
    if below > 1:
        raise NumericalFailure(
            "%d PPT symplectic eigenvalues below 1; at most one is possible "
            "in the 1xN configuration" % below)

    indeterminate = abs(nu_min - 1.0) < tol.eps_ppt
    entangled = nu_min < 1.0 - tol.eps_ppt
    e_n = max(0.0, -math.log(nu_min))

    diagnostics = {"n_modes": cov.n_modes, "eps_ppt": tol.eps_ppt,
                   "nu_next": float(nus[1]) if len(nus) > 1 else float("nan")}
    indicator = float("nan")
    if with_schur:
        try:
            indicator, cond = _schur_indicator_impl(cov, tol)
            diagnostics["vv_condition"] = cond
        except NumericalFailure as err:
            diagnostics["schur_skipped"] = str(err)
        else:
            schur_entangled = indicator < 0.0
            if not indeterminate and schur_entangled != (nu_min < 1.0):
                raise NumericalFailure(
                    "PPT and Schur routes disagree (nu_min=%.12g, indicator=%.6g)"
                    % (nu_min, indicator))
    return EntanglementVerdict(
        nu_min=nu_min,
        log_negativity=e_n,
        schur_indicator=indicator,
        entangled=entangled,
        indeterminate=indeterminate,
        diagnostics=diagnostics,
    )
