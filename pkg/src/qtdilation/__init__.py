"""Time dilation of clocks moving in superpositions of relativistic momenta.

Closed-form dilation coefficients (:mod:`.dilation`), a discretized
Page-Wootters oracle that checks them (:mod:`.pwsim`), parameter sweeps
(:mod:`.sweep`) and an SI feasibility estimator (:mod:`.experiment`).
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .dilation import (
    DilationResult,
    Scenario,
    dilation_result,
    gamma_factor,
    k_classical,
    k_quantum,
    sr_baseline,
)
from .errors import (
    ConfigurationError,
    DomainError,
    NoOptimumError,
    NormalizationError,
    NullConditionError,
)
from .wavepacket import SuperpositionSpec, WavePacket, normalization, overlap, second_moment

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ConfigurationError",
    "DilationResult",
    "DomainError",
    "NoOptimumError",
    "NormalizationError",
    "NullConditionError",
    "Scenario",
    "SuperpositionSpec",
    "WavePacket",
    "dilation_result",
    "gamma_factor",
    "k_classical",
    "k_quantum",
    "normalization",
    "overlap",
    "second_moment",
    "sr_baseline",
]
