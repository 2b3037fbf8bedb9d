"""Discretized Page-Wootters model of two relativistic particles carrying clocks.

Each particle lives on a momentum grid tensored with a finite clock whose
Hamiltonian is ``diag(0, eps, ..., (d-1) eps)``. The particle Hamiltonian
``H = sqrt(p^2 + (1 + H_C)^2)`` (units m = c = hbar = 1) is diagonal in that
basis, so time evolution is a phase per basis vector. The conditional
probability that clock A reads ``tau_A`` when clock B reads ``tau_B`` is

    int dt <psi(t)| P_A(tau_A) x P_B(tau_B) |psi(t)> / int dt <psi(t)| 1 x P_B(tau_B) |psi(t)>

with the t-integral taken over one period of B's clock centred on the time at
which B is expected to read ``tau_B``. Nothing here uses the closed-form
dilation coefficients.

Clock readings live on a ring of circumference ``T = 2 pi / eps``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .dilation import Scenario
from .errors import ConfigurationError, DomainError, NullConditionError
from .wavepacket import SuperpositionSpec, WavePacket, padded_grid

MIN_CLOCK_DIM = 8
MIN_POINTS_PER_WIDTH = 8.0
GRID_PAD = 8.0
# largest clock energy allowed, in units of mc^2
MAX_CLOCK_ENERGY = 1e-2
DEFAULT_CLOCK_ENERGY = 1e-3
# sampling of the t-integral relative to the Nyquist rate of its integrand
OVERSAMPLING = 4.0
NULL_CONDITION = 1e-14
BOUND_SAFETY = 1.5


class AmbiguousReadingWarning(UserWarning):
    """A clock-reading distribution is too wide for its mean or variance to be meaningful."""


@dataclass(frozen=True)
class FiniteClock:
    """Periodic clock with ``dim`` equally spaced levels.

    The covariant reading states ``|tau> = d^-1/2 sum_n exp(-i E_n tau) |E_n>``
    at ``tau_k = k T / d`` form an orthonormal basis.
    """

    dim: int
    energy_step: float

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"clock dimension must be positive, got {self.dim!r}")
        if not self.energy_step > 0:
            raise DomainError(f"clock level spacing must be positive, got {self.energy_step!r}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.energy_step

    @property
    def energies(self) -> np.ndarray:
        return np.arange(self.dim) * self.energy_step

    @property
    def readings(self) -> np.ndarray:
        return np.arange(self.dim) * (self.period / self.dim)

    def state(self, tau: float) -> np.ndarray:
        """Covariant clock state |tau> in the energy basis."""
        return np.exp(-1j * self.energies * tau) / math.sqrt(self.dim)

    def reading_matrix(self) -> np.ndarray:
        """Rows are <tau_k| in the energy basis."""
        k = np.arange(self.dim)
        return np.exp(2j * math.pi * np.outer(k, k) / self.dim) / math.sqrt(self.dim)

    def evolve(self, amp, tau: float) -> np.ndarray:
        return np.asarray(amp) * np.exp(-1j * self.energies * tau)

    def localized_state(self, tau: float, width: float | None = None) -> np.ndarray:
        """Clock state reading ``tau`` with a Gaussian energy envelope.

        ``width`` is the energy standard deviation in level spacings
        (default ``dim / 16``); the envelope is centred mid-band so both ends
        of the spectrum carry negligible weight.
        """
        if width is None:
            width = self.dim / 16.0
        n = np.arange(self.dim)
        env = np.exp(-((n - (self.dim - 1) / 2.0) ** 2) / (4.0 * width * width))
        env /= np.linalg.norm(env)
        return self.evolve(env, tau)

    def reading_probabilities(self, amp) -> np.ndarray:
        amp = np.asarray(amp, dtype=complex)
        # <tau_k|psi> = d^-1/2 sum_n exp(2 pi i n k / d) psi_n
        y = np.fft.ifft(amp) * math.sqrt(self.dim)
        return y.real**2 + y.imag**2


@dataclass(frozen=True)
class TimeWindow:
    """Length (in multiples of B's period, measured in t) and node count of the t-integral."""

    periods: float
    nodes: int


@dataclass(frozen=True, eq=False)
class PwModel:
    clock_a: FiniteClock
    clock_b: FiniteClock
    grid_a: np.ndarray
    grid_b: np.ndarray
    state_a: np.ndarray
    state_b: np.ndarray
    spectrum_a: np.ndarray
    spectrum_b: np.ndarray
    t_window: TimeWindow
    start_a: float
    start_b: float
    b_rate: float
    discretization_bound: float
    scenario: Scenario

    @property
    def relative_spectrum_a(self) -> np.ndarray:
        return _relative_spectrum(self.grid_a, self.clock_a)

    @property
    def relative_spectrum_b(self) -> np.ndarray:
        return _relative_spectrum(self.grid_b, self.clock_b)

    def momentum_density_a(self) -> np.ndarray:
        """Marginal momentum density of particle A on ``grid_a``."""
        return (np.abs(self.state_a) ** 2).sum(axis=1) / _trapezoid_weights(self.grid_a)

    def norm(self) -> float:
        return float(
            np.sqrt((np.abs(self.state_a) ** 2).sum() * (np.abs(self.state_b) ** 2).sum())
        )


@dataclass(frozen=True)
class ConditionalDistribution:
    tau_values: np.ndarray
    probabilities: np.ndarray
    tau_b: float
    period: float
    denominator: float = 1.0


class UncertaintyCheck(NamedTuple):
    product: float
    bound: float
    applicable: bool


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    h = np.diff(grid)
    w = np.zeros_like(grid)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w


def _full_spectrum(grid, clock: FiniteClock) -> np.ndarray:
    mass = 1.0 + clock.energies
    return np.sqrt(grid[:, None] ** 2 + mass[None, :] ** 2)


def _relative_spectrum(grid, clock: FiniteClock) -> np.ndarray:
    """H(p, E_n) - H(p, 0), evaluated without cancellation."""
    e = clock.energies[None, :]
    h = _full_spectrum(grid, clock)
    return (2.0 * e + e * e) / (h + h[:, :1])


def _discretized_packet(amplitude: np.ndarray, grid: np.ndarray) -> np.ndarray:
    amp = amplitude * np.sqrt(_trapezoid_weights(grid))
    return amp / np.linalg.norm(amp)


def _check_grid(name, grid_points, centers, delta):
    span = max(centers) - min(centers) + 2 * GRID_PAD * delta
    per_width = (grid_points - 1) * delta / span
    if per_width < MIN_POINTS_PER_WIDTH:
        raise ConfigurationError(
            f"{name} grid too coarse: {per_width:.2f} points per width, "
            f"need >= {MIN_POINTS_PER_WIDTH:g} (grid_points={grid_points}, span={span:.4g})"
        )


def build_model(
    sc: Scenario,
    d_a: int = 64,
    d_b: int = 64,
    grid_points: int = 256,
    epsilon: float | None = None,
    *,
    clock_width: float | None = None,
    clock_state: str = "gaussian",
    start_a: float = 0.0,
    start_b: float = 0.0,
    nodes: int | None = None,
) -> PwModel:
    """Discretize ``sc`` into a two-particle Page-Wootters model.

    Parameters
    ----------
    sc : Scenario
        Clock A's superposition and clock B's packet centre.
    d_a, d_b : int
        Clock dimensions (>= 8).
    grid_points : int
        Momentum grid size per particle; each grid covers every packet
        centre +- 8 widths and must resolve a width with >= 8 points.
    epsilon : float, optional
        Clock level spacing in units of mc^2. Defaults to a value putting the
        top clock level at 1e-3 mc^2.
    clock_width : float, optional
        Energy spread of the initial clock states in level spacings.
    clock_state : {"gaussian", "sharp"}
        ``"gaussian"`` starts each clock in a Gaussian-envelope state reading
        ``start``; ``"sharp"`` uses the bare covariant state ``|start>``, whose
        flat energy distribution biases circular means by O(T/d).
    start_a, start_b : float
        Initial readings of the clocks.
    nodes : int, optional
        Number of t-quadrature nodes; defaults to 4x the Nyquist rate.

    Raises
    ------
    ConfigurationError
        With the violated bound named.
    """
    d_max = max(d_a, d_b)
    if epsilon is None:
        epsilon = DEFAULT_CLOCK_ENERGY / (d_max - 1) if d_max > 1 else DEFAULT_CLOCK_ENERGY
    if min(d_a, d_b) < MIN_CLOCK_DIM:
        raise ConfigurationError(f"clock dimension must be >= {MIN_CLOCK_DIM}, got {min(d_a, d_b)}")
    if not epsilon > 0:
        raise ConfigurationError(f"clock level spacing must be positive, got {epsilon!r}")
    top = epsilon * (d_max - 1)
    if top > MAX_CLOCK_ENERGY:
        raise ConfigurationError(
            f"clock energies reach {top:.3g} mc^2, above {MAX_CLOCK_ENERGY:g} "
            "(internal energy must stay nonrelativistic)"
        )
    if clock_state not in ("gaussian", "sharp"):
        raise ConfigurationError(f"unknown clock_state {clock_state!r}")

    s = sc.sup_a
    delta = sc.delta
    centers_a = (s.packet_a.pbar, s.packet_a_prime.pbar)
    _check_grid("particle A", grid_points, centers_a, delta)
    _check_grid("particle B", grid_points, (sc.pbar_b,), delta)

    clock_a = FiniteClock(d_a, epsilon)
    clock_b = FiniteClock(d_b, epsilon)
    grid_a = padded_grid(centers_a, delta, grid_points, GRID_PAD)
    grid_b = padded_grid((sc.pbar_b,), delta, grid_points, GRID_PAD)

    def clock_init(clock, start):
        if clock_state == "sharp":
            return clock.state(start)
        return clock.localized_state(start, clock_width)

    ext_a = _discretized_packet(s.amplitude(grid_a), grid_a)
    ext_b = _discretized_packet(WavePacket(sc.pbar_b, delta).amplitude(grid_b), grid_b)
    c_a = clock_init(clock_a, start_a)
    c_b = clock_init(clock_b, start_b)
    state_a = np.outer(ext_a, c_a)
    state_b = np.outer(ext_b, c_b)

    # t elapsed per unit of B's proper time, at B's mean momentum and clock energy
    e_b = float(np.dot(np.abs(c_b) ** 2, clock_b.energies))
    b_rate = math.sqrt(sc.pbar_b**2 + (1.0 + e_b) ** 2) / (1.0 + e_b)

    bandwidth = epsilon * ((d_a - 1) + (d_b - 1))
    length = clock_b.period * b_rate
    min_nodes = int(math.ceil(OVERSAMPLING * length * bandwidth / math.pi))
    if nodes is None:
        nodes = min_nodes
    elif nodes < min_nodes:
        raise ConfigurationError(
            f"t-window has {nodes} nodes, need >= {min_nodes} "
            f"({OVERSAMPLING:g}x Nyquist of the largest energy gap)"
        )

    bound = _kinematic_gap(grid_a, state_a, clock_a, grid_b, state_b, clock_b)
    return PwModel(
        clock_a=clock_a,
        clock_b=clock_b,
        grid_a=grid_a,
        grid_b=grid_b,
        state_a=state_a,
        state_b=state_b,
        spectrum_a=_full_spectrum(grid_a, clock_a),
        spectrum_b=_full_spectrum(grid_b, clock_b),
        t_window=TimeWindow(1.0, nodes),
        start_a=start_a,
        start_b=start_b,
        b_rate=b_rate,
        discretization_bound=BOUND_SAFETY * bound,
        scenario=sc,
    )


def _kinematic_gap(grid_a, state_a, clock_a, grid_b, state_b, clock_b) -> float:
    """Relative gap between exact and leading-order kinematics on the model grids.

    The mean reading ratio of A to B is approximately
    ``<1/g>_A <g^2>_B / <g>_B`` with ``g`` the t-per-proper-time rate at the
    clock's mean energy; the leading-order expansion is
    ``1 - (<p^2>_A - <p^2>_B) / 2``. Their difference is what the oracle is
    expected to deviate by.
    """
    def parts(grid, state, clock):
        rho = (np.abs(state) ** 2).sum(axis=1)
        e = float(np.dot((np.abs(state) ** 2).sum(axis=0), clock.energies))
        g = np.sqrt(grid**2 + (1.0 + e) ** 2) / (1.0 + e)
        return rho, g

    rho_a, g_a = parts(grid_a, state_a, clock_a)
    rho_b, g_b = parts(grid_b, state_b, clock_b)
    exact = np.dot(rho_a, 1.0 / g_a) * np.dot(rho_b, g_b**2) / np.dot(rho_b, g_b)
    leading = 1.0 - (np.dot(rho_a, grid_a**2) - np.dot(rho_b, grid_b**2)) / 2.0
    return float(abs(exact - leading))


def _conditional_parts(m: PwModel, tau_b: float):
    offset = tau_b - m.start_b
    if not 0.0 <= offset < m.clock_b.period:
        raise DomainError(
            f"tau_b - start_b = {offset:.6g} outside clock B's unambiguous range "
            f"[0, {m.clock_b.period:.6g})"
        )
    length = m.t_window.periods * m.clock_b.period * m.b_rate
    nt = m.t_window.nodes
    dt = length / nt
    t0 = offset * m.b_rate - length / 2.0
    bra = np.conj(m.clock_b.state(tau_b))
    g = _kernels.projected_series(m.state_b, m.relative_spectrum_b, bra, t0, dt, nt + 1)
    f = _kernels.reading_series(m.state_a, m.relative_spectrum_a, t0, dt, nt + 1)
    w = np.full(nt + 1, dt)
    w[0] = w[-1] = dt / 2
    wg = w * g
    denom = float(wg.sum())
    if not denom / length >= NULL_CONDITION:
        raise NullConditionError(
            f"clock B reads {tau_b!r} with probability density {denom / length:.3e}; "
            "nothing to condition on"
        )
    return wg @ f, denom


def conditional_distribution(m: PwModel, tau_b: float) -> ConditionalDistribution:
    """Distribution of clock A's reading given that clock B reads ``tau_b``."""
    numer, denom = _conditional_parts(m, tau_b)
    return ConditionalDistribution(
        tau_values=m.clock_a.readings,
        probabilities=numer / denom,
        tau_b=tau_b,
        period=m.clock_a.period,
        denominator=denom,
    )


def _circular_moment(cd: ConditionalDistribution) -> complex:
    angles = 2.0 * math.pi * np.asarray(cd.tau_values) / cd.period
    return complex(np.dot(cd.probabilities, np.exp(1j * angles)))


def mean_reading(cd: ConditionalDistribution) -> float:
    """Circular mean of the reading, on the branch nearest ``cd.tau_b``."""
    z = _circular_moment(cd)
    r = abs(z)
    spread = math.sqrt(-2.0 * math.log(r)) * cd.period / (2 * math.pi) if r > 0 else math.inf
    if spread > cd.period / 4:
        warnings.warn(
            f"reading spread {spread:.4g} exceeds a quarter period; "
            "the clock is too coarse for this mean",
            AmbiguousReadingWarning,
            stacklevel=2,
        )
    mean = math.atan2(z.imag, z.real) * cd.period / (2 * math.pi)
    return mean + cd.period * round((cd.tau_b - mean) / cd.period)


def mixture_distribution(
    m_1: PwModel, m_2: PwModel, w: float, tau_b: float
) -> ConditionalDistribution:
    """Conditional distribution for A prepared as the mixture w*m_1 + (1-w)*m_2.

    Numerators and denominators are mixed separately, as for a density
    matrix, then divided.
    """
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"mixture weight must lie in [0, 1], got {w!r}")
    if (
        m_1.clock_a != m_2.clock_a
        or m_1.clock_b != m_2.clock_b
        or m_1.t_window != m_2.t_window
        or m_1.start_b != m_2.start_b
        or not np.array_equal(m_1.grid_a, m_2.grid_a)
        or not np.array_equal(m_1.grid_b, m_2.grid_b)
        or not np.array_equal(m_1.state_b, m_2.state_b)
    ):
        raise DomainError("mixture components must differ only in particle A's packet")
    if w == 1.0:
        return conditional_distribution(m_1, tau_b)
    if w == 0.0:
        return conditional_distribution(m_2, tau_b)
    n1, d1 = _conditional_parts(m_1, tau_b)
    n2, d2 = _conditional_parts(m_2, tau_b)
    denom = w * d1 + (1.0 - w) * d2
    return ConditionalDistribution(
        tau_values=m_1.clock_a.readings,
        probabilities=(w * n1 + (1.0 - w) * n2) / denom,
        tau_b=tau_b,
        period=m_1.clock_a.period,
        denominator=denom,
    )


def branch_models(sc: Scenario, **build_kw) -> tuple[PwModel, PwModel]:
    """Models with A in each branch of ``sc``'s superposition alone.

    Both share the grid of the full superposition, so they can be mixed.
    """
    s = sc.sup_a
    pa, pap = s.packet_a.pbar, s.packet_a_prime.pbar
    out = []
    for theta in (0.0, math.pi / 2):
        sup = SuperpositionSpec.from_momenta(theta, 0.0, pa, pap, sc.delta)
        out.append(build_model(Scenario(sup, sc.pbar_b, sc.delta, sc.tau_b), **build_kw))
    return out[0], out[1]


def clock_uncertainty(clock: FiniteClock, amp, seam_tolerance: float = 1e-3) -> UncertaintyCheck:
    """Reading spread times mass spread for a pure clock state.

    In natural units the mass operator is ``1 + H_C`` and the bound
    ``hbar / 2 c^2`` is 1/2. The reading variance is taken about the circular
    mean over the period centred on it; states with more than
    ``seam_tolerance`` probability within T/8 of the opposite point are
    reported as not applicable.
    """
    amp = np.asarray(amp, dtype=complex)
    amp = amp / np.linalg.norm(amp)
    pe = np.abs(amp) ** 2
    e = clock.energies
    d_mass = math.sqrt(max(float(np.dot(pe, e * e) - np.dot(pe, e) ** 2), 0.0))

    pt = clock.reading_probabilities(amp)
    period = clock.period
    cd = ConditionalDistribution(clock.readings, pt, 0.0, period)
    z = _circular_moment(cd)
    if abs(z) < 1e-12 or d_mass == 0.0:
        return UncertaintyCheck(0.0, 0.5, False)
    centre = math.atan2(z.imag, z.real) * period / (2 * math.pi)
    rel = (clock.readings - centre + period / 2) % period - period / 2
    near_seam = float(pt[np.abs(rel) > 3 * period / 8].sum())
    applicable = near_seam <= seam_tolerance
    if not applicable:
        warnings.warn(
            f"clock state has {near_seam:.3g} probability near the period seam; "
            "reading variance is ambiguous",
            AmbiguousReadingWarning,
            stacklevel=2,
        )
    mean = float(np.dot(pt, rel))
    d_time = math.sqrt(max(float(np.dot(pt, (rel - mean) ** 2)), 0.0))
    return UncertaintyCheck(d_time * d_mass, 0.5, applicable)


def uncertainty_diagnostic(m: PwModel) -> UncertaintyCheck:
    """Both sides of the time-mass uncertainty relation for clock A's internal state."""
    rho = m.state_a.T @ m.state_a.conj()
    w, v = np.linalg.eigh(rho)
    # the model's states are products, so clock A is pure up to rounding
    return clock_uncertainty(m.clock_a, v[:, -1] * math.sqrt(w[-1]))
