"""Order-of-magnitude feasibility of seeing K_quantum with a moving atomic clock.

Clock B is the lab (p_B = 0). The atom's two branches move at ``v1`` and
``v2``; the velocity spread ``delta_v`` sets the packet width through
``Delta / mc = delta_v / c``, which is exact at leading order in v/c.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

from . import units
from .dilation import Scenario, dilation_result
from .errors import DomainError
from .sweep import optimal_difference

RB87_HYPERFINE_HZ = 6_834_682_610.904  # Rb-87 ground-state hyperfine splitting


@dataclass(frozen=True)
class ScenarioSI:
    mass: float
    v1: float
    v2: float
    theta: float
    phi: float
    delta_v: float
    tau_b: float
    transition_freq: float
    clock_resolution: float
    coherence_time: float

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass!r}")
        for name in ("v1", "v2"):
            v = getattr(self, name)
            if not abs(v) < units.C:
                raise DomainError(f"{name} = {v!r} m/s is not below c")
        if not self.delta_v > 0:
            raise DomainError(f"delta_v must be positive, got {self.delta_v!r}")
        for name in ("transition_freq", "clock_resolution", "coherence_time"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.tau_b >= 0:
            raise DomainError(f"tau_b must be non-negative, got {self.tau_b!r}")

    def natural(self) -> Scenario:
        p1 = units.velocity_to_momentum(self.v1)
        p2 = units.velocity_to_momentum(self.v2)
        delta = self.delta_v / units.C
        return Scenario.build(self.theta, self.phi, p1, p2, 0.0, delta, self.tau_b)


@dataclass(frozen=True)
class FeasibilityReport:
    k_classical: float
    k_quantum: float
    gamma_eff_inv: float
    tau_b: float
    tau_b_effective: float
    time_shift_quantum: float
    transition_freq: float
    lab_frequency: float
    resonance_shift: float
    clock_resolution: float
    coherence_time: float
    margin: float
    detectable: bool

    def as_dict(self) -> dict:
        return asdict(self)


def estimate(sc: ScenarioSI) -> FeasibilityReport:
    """Dilation coefficients, resonance shift and detectability for ``sc``.

    The quantum time shift accumulates for ``min(tau_b, coherence_time)``.
    """
    res = dilation_result(sc.natural())
    tau_eff = min(sc.tau_b, sc.coherence_time)
    shift = tau_eff * res.k_quantum
    margin = abs(shift) / sc.clock_resolution
    # nu * (gamma_eff_inv - 1) without cancelling against 1
    resonance_shift = -sc.transition_freq * (res.k_classical + res.k_quantum)
    return FeasibilityReport(
        k_classical=res.k_classical,
        k_quantum=res.k_quantum,
        gamma_eff_inv=res.gamma_eff_inv,
        tau_b=sc.tau_b,
        tau_b_effective=tau_eff,
        time_shift_quantum=shift,
        transition_freq=sc.transition_freq,
        lab_frequency=sc.transition_freq + resonance_shift,
        resonance_shift=resonance_shift,
        clock_resolution=sc.clock_resolution,
        coherence_time=sc.coherence_time,
        margin=margin,
        detectable=abs(shift) >= sc.clock_resolution,
    )


@lru_cache(maxsize=None)
def optimal_width_ratio(theta: float = math.pi / 4, phi: float = 0.0) -> float:
    """Branch separation in packet widths that maximizes |K_quantum| (momentum sum 0)."""
    diff, _ = optimal_difference(0.0, 1.0, theta, phi, bracket=(0.0, 40.0))
    return diff


def _rb87_default() -> ScenarioSI:
    v1, v2 = 10.0, 40.0
    theta, phi = math.pi / 4, 0.0
    return ScenarioSI(
        mass=units.M_RB87,
        v1=v1,
        v2=v2,
        theta=theta,
        phi=phi,
        delta_v=(v2 - v1) / optimal_width_ratio(theta, phi),
        tau_b=10.0,
        transition_freq=RB87_HYPERFINE_HZ,
        clock_resolution=1e-14,
        coherence_time=10.0,
    )


_SCENARIOS = {"rb87-default": _rb87_default}


def scenario_names() -> list[str]:
    return sorted(_SCENARIOS)


def builtin_scenario(name: str) -> ScenarioSI:
    try:
        factory = _SCENARIOS[name]
    except KeyError:
        raise DomainError(
            f"unknown scenario {name!r}; available: {', '.join(scenario_names())}"
        ) from None
    return factory()
