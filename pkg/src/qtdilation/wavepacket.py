"""Gaussian momentum wave packets and two-branch superpositions.

Amplitude convention (fixed for the whole package)::

    psi(p) = (pi * delta**2) ** -0.25 * exp(-(p - pbar)**2 / (2 * delta**2))

so the overlap of two equal-width packets is ``exp(-(pbar' - pbar)**2 / (4 delta**2))``
and a single packet has ``<p^2> = pbar**2 + delta**2 / 2``. Here ``delta`` is the
amplitude width; the momentum *density* has standard deviation
``delta / sqrt(2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NormalizationError

NORM_FLOOR = 1e-9
GH_NODES = 64
# trig values below this are exact zeros at multiples of pi/2
_TRIG_ZERO = 1e-15


def exact_cos(x: float) -> float:
    v = math.cos(x)
    return 0.0 if abs(v) < _TRIG_ZERO else v


def exact_sin(x: float) -> float:
    v = math.sin(x)
    return 0.0 if abs(v) < _TRIG_ZERO else v


@dataclass(frozen=True)
class WavePacket:
    pbar: float
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"packet width must be positive, got {self.delta!r}")

    def amplitude(self, p):
        p = np.asarray(p, dtype=float)
        d = self.delta
        return (math.pi * d * d) ** -0.25 * np.exp(-((p - self.pbar) ** 2) / (2 * d * d))


@dataclass(frozen=True)
class SuperpositionSpec:
    """``(cos(theta)|a> + exp(i phi) sin(theta)|a'>) / sqrt(N)``.

    Construction does not check the norm floor, so that sweeps can carry
    near-null states around and flag them; ``normalization`` raises.
    """

    theta: float
    phi: float
    packet_a: WavePacket
    packet_a_prime: WavePacket

    def __post_init__(self):
        if self.packet_a.delta != self.packet_a_prime.delta:
            raise DomainError(
                "both branches must share one width: "
                f"{self.packet_a.delta!r} != {self.packet_a_prime.delta!r}"
            )

    @classmethod
    def from_momenta(cls, theta, phi, pa, pa_prime, delta):
        return cls(theta, phi, WavePacket(pa, delta), WavePacket(pa_prime, delta))

    @property
    def delta(self) -> float:
        return self.packet_a.delta

    @property
    def coherence(self) -> float:
        """sin(2 theta) cos(phi), the weight of the interference term."""
        return exact_sin(2 * self.theta) * exact_cos(self.phi)

    def exchanged(self) -> "SuperpositionSpec":
        """Same physical state with the branches swapped (theta -> pi/2 - theta)."""
        return SuperpositionSpec(
            math.pi / 2 - self.theta, self.phi, self.packet_a_prime, self.packet_a
        )

    def amplitude(self, p):
        """Unnormalized amplitude (no 1/sqrt(N) factor)."""
        return exact_cos(self.theta) * self.packet_a.amplitude(p) + np.exp(
            1j * self.phi
        ) * exact_sin(self.theta) * self.packet_a_prime.amplitude(p)


def overlap(a: WavePacket, b: WavePacket) -> float:
    if a.delta != b.delta:
        raise DomainError(f"overlap needs equal widths, got {a.delta!r} and {b.delta!r}")
    diff = b.pbar - a.pbar
    return math.exp(-(diff * diff) / (4 * a.delta * a.delta))


def normalization(s: SuperpositionSpec) -> float:
    n = 1.0 + s.coherence * overlap(s.packet_a, s.packet_a_prime)
    if not n >= NORM_FLOOR:
        raise NormalizationError(
            f"superposition norm {n:.3e} is below {NORM_FLOOR:g} "
            "(destructive interference leaves no state)"
        )
    return n


@lru_cache(maxsize=None)
def _hermgauss(n: int):
    x, w = np.polynomial.hermite.hermgauss(n)
    return x, w / math.sqrt(math.pi)


def gaussian_expectation(f, mean: float, var: float, nodes: int = GH_NODES) -> float:
    """E[f(X)] for X ~ Normal(mean, var) by Gauss-Hermite quadrature."""
    x, w = _hermgauss(nodes)
    return float(np.dot(w, f(mean + math.sqrt(2.0 * var) * x)))


def _density_components(s: SuperpositionSpec):
    """Decompose |psi|^2 (unnormalized) into weighted normal densities.

    Each product of two equal-width packets is a normal density in p with
    variance delta^2/2, scaled by the packets' overlap.
    """
    a, b, d = s.packet_a.pbar, s.packet_a_prime.pbar, s.delta
    var = d * d / 2
    c2 = exact_cos(s.theta) ** 2
    s2 = exact_sin(s.theta) ** 2
    cross = s.coherence * overlap(s.packet_a, s.packet_a_prime)
    return [(c2, a, var), (s2, b, var), (cross, 0.5 * (a + b), var)]


def expectation(s: SuperpositionSpec, f, nodes: int = GH_NODES) -> float:
    """<psi| f(p) |psi> for the normalized superposition, by quadrature per branch."""
    n = normalization(s)
    total = 0.0
    for weight, mean, var in _density_components(s):
        if weight != 0.0:
            total += weight * gaussian_expectation(f, mean, var, nodes)
    return total / n


def second_moment(s: SuperpositionSpec) -> float:
    """<p^2> of the normalized superposition, integrated numerically."""
    return expectation(s, np.square)


def quadrature_overlap(a: WavePacket, b: WavePacket, nodes: int = GH_NODES) -> float:
    """Inner product of two packets by Gauss-Hermite quadrature around packet ``a``.

    Independent of the closed form in :func:`overlap`; used to check it.
    """
    x, w = np.polynomial.hermite.hermgauss(nodes)
    p = a.pbar + a.delta * x
    # psi_a(p) = (pi d^2)^(-1/4) exp(-x^2/2); the Hermite weight absorbs exp(-x^2)
    integrand = a.amplitude(p) * b.amplitude(p) * np.exp(x * x)
    return float(np.dot(w, integrand) * a.delta)


def sample_density(s: SuperpositionSpec, p_grid) -> np.ndarray:
    """|psi(p)|^2 / N on ``p_grid``."""
    p = np.asarray(p_grid, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError("momentum grid must be a non-empty 1-d sequence")
    if p.size > 1 and not np.all(np.diff(p) > 0):
        raise DomainError("momentum grid must be strictly increasing")
    n = normalization(s)
    return np.abs(s.amplitude(p)) ** 2 / n


def padded_grid(centers, delta: float, points: int, pad: float = 8.0) -> np.ndarray:
    """Uniform grid covering every center +- ``pad`` widths."""
    lo = min(centers) - pad * delta
    hi = max(centers) + pad * delta
    return np.linspace(lo, hi, points)
