"""Stationary optomechanical entanglement for rational noise spectra.

Decides whether the steady Gaussian state of a continuously probed
mechanical oscillator and its reflected light field is entangled, and maps
the entangling-disentangling transition over environmental noise levels.
"""

from .spectra import (
    RationalSpectrum,
    NoiseModel,
    SqlReference,
    SpectrumError,
    white_force,
    white_sensing,
    displacement_referred_sum,
    minimize_displacement_ratio,
)
from .plant import PlantParams, TransferMatrices, susceptibility, transfer, spectral_density
from .squeeze import InputFieldState, input_spectrum, filter_transfer, autotune_filter
from .covariance import (
    TemporalModeBasis,
    QuadratureSettings,
    CovarianceMatrix,
    NumericalFailure,
    build_covariance,
    window_fourier,
)
from .entanglement import (
    PpTolerances,
    EntanglementVerdict,
    partial_transpose,
    symplectic_spectrum,
    ppt_verdict,
    schur_indicator,
    log_negativity,
)

__version__ = "0.1.0"
