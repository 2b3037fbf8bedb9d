"""Oracle runs set against the closed forms, row by row."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import pwsim
from .dilation import Scenario, dilation_result
from .errors import DomainError

# absolute tolerance on the mean reading, per unit of tau_b
MEAN_TOLERANCE = 3e-6
# relative tolerance on the superposition-minus-mixture shift
SHIFT_TOLERANCE = 0.10
# below this |K_quantum| the shift check is not meaningful
MIN_RESOLVABLE_KQ = 1e-6


@dataclass(frozen=True)
class OracleRow:
    tau_b: float
    analytic_mean: float
    oracle_mean: float
    abs_diff: float
    tolerance: float
    passed: bool
    mixture_mean: float = math.nan
    quantum_shift: float = math.nan
    expected_shift: float = math.nan
    shift_rel_err: float = math.nan
    shift_passed: bool | None = None

    @property
    def ok(self) -> bool:
        return self.passed and self.shift_passed is not False


def mean_tolerance(m: pwsim.PwModel, tau_b: float) -> float:
    return max(MEAN_TOLERANCE, m.discretization_bound) * tau_b


def compare(
    sc: Scenario,
    tau_fractions,
    mixture: bool = False,
    **build_kw,
) -> list[OracleRow]:
    """Run the oracle at ``tau_b = f * T_B`` for each fraction ``f``.

    With ``mixture`` the cos^2/sin^2 mixture of the two branches is run too,
    and the superposition-minus-mixture mean is set against ``-K_quantum tau_b``.
    """
    m = pwsim.build_model(sc, **build_kw)
    branches = pwsim.branch_models(sc, **build_kw) if mixture else None
    weight = math.cos(sc.sup_a.theta) ** 2
    rows = []
    for f in tau_fractions:
        if not 0.0 <= f < 1.0:
            raise DomainError(f"tau_b fraction must lie in [0, 1), got {f!r}")
        tau_b = f * m.clock_b.period
        res = dilation_result(Scenario(sc.sup_a, sc.pbar_b, sc.delta, tau_b))
        oracle = pwsim.mean_reading(pwsim.conditional_distribution(m, tau_b))
        diff = abs(oracle - res.mean_tau_a)
        tol = mean_tolerance(m, tau_b)
        row = dict(
            tau_b=tau_b,
            analytic_mean=res.mean_tau_a,
            oracle_mean=oracle,
            abs_diff=diff,
            tolerance=tol,
            passed=diff <= tol,
        )
        if branches is not None:
            mix = pwsim.mean_reading(pwsim.mixture_distribution(*branches, weight, tau_b))
            shift = oracle - mix
            expected = -res.k_quantum * tau_b
            row.update(mixture_mean=mix, quantum_shift=shift, expected_shift=expected)
            if abs(res.k_quantum) >= MIN_RESOLVABLE_KQ:
                rel = abs(shift - expected) / abs(expected)
                row.update(shift_rel_err=rel, shift_passed=rel <= SHIFT_TOLERANCE)
        rows.append(OracleRow(**row))
    return rows
