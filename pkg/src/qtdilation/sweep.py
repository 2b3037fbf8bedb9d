"""K_quantum against the momentum difference of the two branches, at fixed momentum sum.

A slice at sum ``beta`` and difference ``diff`` uses packet centres
``(beta - diff) / 2`` and ``(beta + diff) / 2``.
"""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .dilation import k_classical, k_quantum
from .errors import DomainError, NoOptimumError, NormalizationError
from .wavepacket import SuperpositionSpec

CSV_HEADER = ("beta", "diff", "k_classical", "k_quantum", "gamma_eff_inv", "status")
OPTIMAL_HEADER = ("beta", "diff_star", "k_quantum_star")
FLAT_OBJECTIVE = 1e-30
COARSE_POINTS = 200
# placeholder momentum sums for the default plan
DEFAULT_BETAS = (0.02, 0.05, 0.1)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepPlan:
    beta_values: tuple[float, ...]
    diff_min: float
    diff_max: float
    diff_step: float
    delta: float
    theta: float = math.pi / 4
    phi: float = 0.0
    pbar_b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta_values", tuple(float(b) for b in self.beta_values))
        if not self.delta > 0:
            raise DomainError(f"delta must be positive, got {self.delta!r}")
        if not self.diff_step > 0:
            raise DomainError(f"diff step must be positive, got {self.diff_step!r}")
        if not (self.diff_min >= 0 and self.diff_max > self.diff_min):
            raise DomainError(
                f"diff range must satisfy 0 <= min < max, got [{self.diff_min!r}, {self.diff_max!r}]"
            )

    def diffs(self) -> np.ndarray:
        count = int(math.floor((self.diff_max - self.diff_min) / self.diff_step + 1e-9)) + 1
        return self.diff_min + np.arange(count) * self.diff_step


def default_plan(delta: float = 0.01, theta: float = math.pi / 4, phi: float = 0.0) -> SweepPlan:
    """Line family out to 50 widths in steps of a hundredth of a width."""
    return SweepPlan(DEFAULT_BETAS, 0.0, 50 * delta, delta / 100, delta, theta, phi)


@dataclass(frozen=True)
class SweepRow:
    beta: float
    diff: float
    k_quantum: float
    k_classical: float
    gamma_eff_inv: float
    status: str = field(default="ok")


def branch_momenta(beta: float, diff: float) -> tuple[float, float]:
    return (beta - diff) / 2.0, (beta + diff) / 2.0


def _spec(beta, diff, delta, theta, phi) -> SuperpositionSpec:
    pa, pap = branch_momenta(beta, diff)
    return SuperpositionSpec.from_momenta(theta, phi, pa, pap, delta)


def evaluate_row(plan: SweepPlan, beta: float, diff: float) -> SweepRow:
    s = _spec(beta, diff, plan.delta, plan.theta, plan.phi)
    kc = k_classical(plan.theta, s.packet_a.pbar, s.packet_a_prime.pbar, plan.pbar_b)
    try:
        kq = k_quantum(s)
    except NormalizationError:
        return SweepRow(beta, diff, math.nan, kc, math.nan, "null-norm")
    return SweepRow(beta, diff, kq, kc, 1.0 - kc - kq)


def run_sweep(plan: SweepPlan) -> list[SweepRow]:
    diffs = plan.diffs()
    return [evaluate_row(plan, beta, float(diff)) for beta in plan.beta_values for diff in diffs]


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    x = x1 if f1 >= f2 else x2
    return x, max(f1, f2)


def optimal_difference(
    beta: float,
    delta: float,
    theta: float = math.pi / 4,
    phi: float = 0.0,
    bracket: tuple[float, float] | None = None,
) -> tuple[float, float]:
    """Difference maximizing |K_quantum| at momentum sum ``beta``.

    Scans ``COARSE_POINTS`` points of the bracket (default ``(0, 40 delta)``),
    then refines around the best one by golden-section search. Ties on the
    coarse grid go to the smaller difference.

    Returns
    -------
    diff_star, k_quantum_star
        The maximizer and the signed K_quantum there.
    """
    if bracket is None:
        bracket = (0.0, 40.0 * delta)
    lo, hi = bracket
    if not hi > lo:
        raise DomainError(f"empty bracket {bracket!r}")

    def objective(diff):
        try:
            return abs(k_quantum(_spec(beta, diff, delta, theta, phi)))
        except NormalizationError:
            return -math.inf

    grid = np.linspace(lo, hi, COARSE_POINTS)
    values = np.array([objective(x) for x in grid])
    best = int(np.argmax(values))
    if not values[best] >= FLAT_OBJECTIVE:
        raise NoOptimumError(
            f"|K_quantum| < {FLAT_OBJECTIVE:g} over [{lo:g}, {hi:g}] at beta={beta:g}"
        )
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, COARSE_POINTS - 1)]
    x, _ = golden_section_max(objective, float(a), float(b))
    if objective(x) < values[best]:
        x = float(grid[best])
    return x, k_quantum(_spec(beta, x, delta, theta, phi))


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def emit_csv(rows, path) -> None:
    """Write sweep rows with full precision and LF line endings."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in rows:
                writer.writerow(
                    [_fmt(v) for v in (r.beta, r.diff, r.k_classical, r.k_quantum, r.gamma_eff_inv)]
                    + [r.status]
                )
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {os.fspath(path)!r}: {exc.strerror}") from exc


def read_csv(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            SweepRow(
                float(rec["beta"]),
                float(rec["diff"]),
                float(rec["k_quantum"]),
                float(rec["k_classical"]),
                float(rec["gamma_eff_inv"]),
                rec["status"],
            )
            for rec in reader
        ]


def emit_optimal_csv(optima, path) -> None:
    """``optima`` is an iterable of ``(beta, diff_star, k_quantum_star)``."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(OPTIMAL_HEADER)
            for row in optima:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write optimum CSV to {os.fspath(path)!r}: {exc.strerror}") from exc


def plot_script(sweep_csv: str, optimal_csv: str, betas, delta: float) -> str:
    """Gnuplot script drawing |K_quantum| against diff, one line per beta, plus the optimum trace."""
    lines = [
        "# |K_quantum| versus momentum difference; one curve per momentum sum",
        "set datafile separator ','",
        f"set title 'Delta/mc = {delta:g}'",
        "set xlabel '(p_A'' - p_A)/mc'",
        "set ylabel '|K_quantum|'",
    ]
    series = []
    for i, beta in enumerate(betas):
        series.append(
            f"'{sweep_csv}' every ::1 using ($1=={beta!r} ? $2 : 1/0):(abs($4)) "
            f"with lines title 'beta = {beta:g}'"
        )
    series.append(
        f"'{optimal_csv}' every ::1 using 2:(abs($3)) with linespoints dt 2 lc rgb 'black' "
        "title 'optimal difference'"
    )
    lines.append("plot " + ", \\\n     ".join(series))
    return "\n".join(lines) + "\n"
