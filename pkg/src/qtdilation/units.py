"""Natural units (m = c = hbar = 1) and the SI constants needed at the boundary.

Momenta are carried as p/mc, energies as E/mc^2 and times in units of
hbar/mc^2 unless a function says otherwise. SI quantities only appear in the
experiment estimator and the CLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

C = 299_792_458.0  # m/s
HBAR = 1.054_571_817e-34  # J s
ATOMIC_MASS_UNIT = 1.660_539_066_60e-27  # kg
M_RB87 = 86.909_180_520 * ATOMIC_MASS_UNIT  # kg


@dataclass(frozen=True)
class Constants:
    c: float = C
    hbar: float = HBAR
    m_rb87: float = M_RB87

    def __post_init__(self):
        for name in ("c", "hbar", "m_rb87"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be positive")


CONSTANTS = Constants()


class Kind(str, Enum):
    MOMENTUM = "momentum_over_mc"
    ENERGY = "energy_over_mc2"
    TIME = "time"
    DIMENSIONLESS = "dimensionless"


@dataclass(frozen=True)
class NaturalValue:
    """A dimensionless number tagged with the quantity it stands for.

    Addition and subtraction require matching kinds. Scaling by a plain
    number or by a ``DIMENSIONLESS`` value keeps the kind.
    """

    value: float
    kind: Kind = Kind.DIMENSIONLESS

    def _same_kind(self, other: "NaturalValue") -> None:
        if not isinstance(other, NaturalValue):
            raise TypeError(f"cannot combine NaturalValue with {type(other).__name__}")
        if other.kind is not self.kind:
            raise TypeError(f"kind mismatch: {self.kind.value} vs {other.kind.value}")

    def __add__(self, other):
        self._same_kind(other)
        return NaturalValue(self.value + other.value, self.kind)

    def __sub__(self, other):
        self._same_kind(other)
        return NaturalValue(self.value - other.value, self.kind)

    def __neg__(self):
        return NaturalValue(-self.value, self.kind)

    def __mul__(self, other):
        if isinstance(other, NaturalValue):
            if other.kind is Kind.DIMENSIONLESS:
                return NaturalValue(self.value * other.value, self.kind)
            if self.kind is Kind.DIMENSIONLESS:
                return NaturalValue(self.value * other.value, other.kind)
            raise TypeError(f"product of {self.kind.value} and {other.kind.value} has no kind")
        return NaturalValue(self.value * float(other), self.kind)

    __rmul__ = __mul__

    def __float__(self):
        return float(self.value)


def momentum_si_to_natural(p_si: float, mass: float) -> float:
    """Return p / (m c) for a momentum in kg m/s."""
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    return p_si / (mass * C)


def momentum_natural_to_si(p: float, mass: float) -> float:
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    return p * mass * C


def velocity_to_momentum(v: float) -> float:
    """Exact relativistic p/mc for a speed ``v`` in m/s.

    Inverts ``v = p / (gamma m)`` with ``gamma = sqrt(1 + p^2)``.
    """
    beta = v / C
    if not abs(beta) < 1.0:
        raise ValueError(f"|v| must be below c, got {v!r} m/s")
    return beta / math.sqrt((1.0 - beta) * (1.0 + beta))


def momentum_to_velocity(p: float) -> float:
    """Speed in m/s of a particle with momentum p/mc."""
    return C * p / math.sqrt(1.0 + p * p)


def time_natural_to_si(t: float, mass: float) -> float:
    """Convert a time in units of hbar/(m c^2) to seconds."""
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    return t * HBAR / (mass * C * C)


def time_si_to_natural(t: float, mass: float) -> float:
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    return t * mass * C * C / HBAR
