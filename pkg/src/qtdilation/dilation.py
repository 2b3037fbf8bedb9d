"""Closed-form average time dilation of a clock in a momentum superposition.

All momenta are p/mc, so the m^2 c^2 denominators are 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .wavepacket import SuperpositionSpec, exact_cos, exact_sin, normalization

# exponent beyond which exp() is evaluated through logs
_LOG_SPACE_EXPONENT = 700.0


@dataclass(frozen=True)
class Scenario:
    """Clock A in ``sup_a``; clock B in a single packet at ``pbar_b``; B reads ``tau_b``."""

    sup_a: SuperpositionSpec
    pbar_b: float
    delta: float
    tau_b: float = 1.0

    def __post_init__(self):
        if self.delta != self.sup_a.delta:
            raise DomainError(
                f"scenario width {self.delta!r} differs from packet width {self.sup_a.delta!r}"
            )
        if not self.tau_b >= 0:
            raise DomainError(f"tau_b must be non-negative, got {self.tau_b!r}")

    @classmethod
    def build(cls, theta, phi, pa, pa_prime, pb, delta, tau_b=1.0):
        return cls(SuperpositionSpec.from_momenta(theta, phi, pa, pa_prime, delta), pb, delta, tau_b)


@dataclass(frozen=True)
class DilationResult:
    k_classical: float
    k_quantum: float
    gamma_eff_inv: float
    mean_tau_a: float


def gamma_factor(pbar: float) -> float:
    return math.sqrt(1.0 + pbar * pbar)


def k_classical(theta: float, pa: float, pa_prime: float, pb: float) -> float:
    c2 = exact_cos(theta) ** 2
    s2 = exact_sin(theta) ** 2
    return (pa * pa * c2 + pa_prime * pa_prime * s2 - pb * pb) / 2.0


def k_quantum_log(s: SuperpositionSpec) -> tuple[float, float]:
    """Return ``(sign, log|K_quantum|)``; sign is 0.0 when K_quantum vanishes exactly.

    Keeps the sign and size of the far-separation tail where the Gaussian
    factor underflows.
    """
    a, b = s.packet_a.pbar, s.packet_a_prime.pbar
    diff = b - a
    exponent = diff * diff / (4.0 * s.delta * s.delta)
    n = normalization(s)
    bracket = 2.0 * (b * b - a * a) * exact_cos(2.0 * s.theta) - diff * diff
    prefactor = s.coherence * bracket / (8.0 * n)
    if prefactor == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, prefactor), math.log(abs(prefactor)) - exponent


def k_quantum(s: SuperpositionSpec) -> float:
    a, b = s.packet_a.pbar, s.packet_a_prime.pbar
    diff = b - a
    exponent = diff * diff / (4.0 * s.delta * s.delta)
    if exponent > _LOG_SPACE_EXPONENT:
        sign, logmag = k_quantum_log(s)
        # underflows to a signed zero, which still carries the sign
        return math.copysign(math.exp(logmag), sign) if sign else 0.0
    n = normalization(s)
    bracket = 2.0 * (b * b - a * a) * exact_cos(2.0 * s.theta) - diff * diff
    return s.coherence / (8.0 * n) * math.exp(-exponent) * bracket


def dilation_result(sc: Scenario, include_quantum: bool = True) -> DilationResult:
    """Assemble K_classical, K_quantum, 1/gamma_eff and <T_A>.

    ``include_quantum=False`` gives the classical-mixture baseline, in which
    the coherence term is absent.
    """
    s = sc.sup_a
    kc = k_classical(s.theta, s.packet_a.pbar, s.packet_a_prime.pbar, sc.pbar_b)
    kq = k_quantum(s) if include_quantum else 0.0
    g_inv = 1.0 - kc - kq
    return DilationResult(kc, kq, g_inv, g_inv * sc.tau_b)


def sr_baseline(pa: float, pb: float, tau_b: float) -> float:
    """Special-relativistic reading of A when B reads ``tau_b``: (gamma_B/gamma_A) tau_b."""
    return gamma_factor(pb) / gamma_factor(pa) * tau_b
