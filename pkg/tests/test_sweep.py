import math

import numpy as np
import pytest

from qtdilation import dilation as dl
from qtdilation import sweep
from qtdilation.errors import DomainError, NoOptimumError
from qtdilation.sweep import SweepPlan, SweepRow
from qtdilation.wavepacket import SuperpositionSpec

D = 0.01


def brute_force_argmax(delta, step=1e-5, upper=0.4):
    # theta = pi/4, phi = 0: |K_q| = x^2 w / (8 (1 + w)) with w = exp(-x^2 / 4 delta^2)
    x = np.arange(0.0, upper + step / 2, step)
    w = np.exp(-(x**2) / (4 * delta * delta))
    return x[np.argmax(x * x * w / (8 * (1 + w)))]


@pytest.fixture(scope="module")
def default_rows():
    return sweep.run_sweep(sweep.default_plan(D))


def test_plan_validation():
    with pytest.raises(DomainError):
        SweepPlan((0.1,), 0.0, 0.1, 0.0, D)
    with pytest.raises(DomainError):
        SweepPlan((0.1,), 0.1, 0.1, 0.01, D)
    with pytest.raises(DomainError):
        SweepPlan((0.1,), 0.0, 0.1, 0.01, -D)


def test_plan_diffs_include_endpoint():
    diffs = SweepPlan((0.1,), 0.0, 0.02, 0.01, D).diffs()
    np.testing.assert_allclose(diffs, [0.0, 0.01, 0.02])


def test_rows_order_and_recomputation(default_rows):
    plan = sweep.default_plan(D)
    diffs = plan.diffs()
    assert len(default_rows) == len(plan.beta_values) * len(diffs)
    assert [r.beta for r in default_rows[:: len(diffs)]] == list(plan.beta_values)
    # spot-check 1% of rows against direct calls
    rng = np.random.default_rng(7)
    for i in rng.choice(len(default_rows), len(default_rows) // 100, replace=False):
        r = default_rows[i]
        pa, pap = sweep.branch_momenta(r.beta, r.diff)
        s = SuperpositionSpec.from_momenta(plan.theta, plan.phi, pa, pap, D)
        assert r.k_quantum == dl.k_quantum(s)
        assert r.k_classical == dl.k_classical(plan.theta, pa, pap, plan.pbar_b)


def test_zero_difference_rows_vanish(default_rows):
    assert all(r.k_quantum == 0.0 for r in default_rows if r.diff == 0.0)


def test_large_difference_rows_vanish(default_rows):
    far = [r for r in default_rows if r.diff >= 40 * D - 1e-12]
    assert far and all(abs(r.k_quantum) < 1e-40 for r in far)


def test_reparameterized_example():
    row = sweep.evaluate_row(sweep.default_plan(D), 0.1, 0.02)
    assert row.k_quantum == pytest.approx(-1.3447071068499757e-05, rel=1e-12)


def test_single_interior_maximum(default_rows):
    for beta in sweep.DEFAULT_BETAS:
        mag = np.abs([r.k_quantum for r in default_rows if r.beta == beta])
        peaks = np.flatnonzero((mag[1:-1] > mag[:-2]) & (mag[1:-1] >= mag[2:])) + 1
        assert len(peaks) == 1 and 0 < peaks[0] < len(mag) - 1


def test_null_norm_rows_are_flagged():
    plan = SweepPlan((0.1,), 0.0, 0.02, 0.01, D, theta=math.pi / 4, phi=math.pi)
    rows = sweep.run_sweep(plan)
    assert rows[0].status == "null-norm" and math.isnan(rows[0].k_quantum)
    assert all(r.status == "ok" for r in rows[1:])


def test_golden_section_finds_parabola_peak():
    x, fx = sweep.golden_section_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-6) and fx <= 0


@pytest.mark.parametrize("delta", [0.01, 0.02])
def test_optimal_difference_matches_brute_force(delta):
    diff, kq = sweep.optimal_difference(0.1, delta)
    assert abs(diff - brute_force_argmax(delta)) <= 2e-5
    assert abs(kq) == pytest.approx(abs(dl.k_quantum(
        SuperpositionSpec.from_momenta(math.pi / 4, 0.0, *sweep.branch_momenta(0.1, diff), delta))))


def test_optimal_difference_values():
    # brute-force scans at 1e-5 steps give 0.02261 and 0.04523
    d1, _ = sweep.optimal_difference(0.1, 0.01)
    d2, _ = sweep.optimal_difference(0.1, 0.02)
    assert d1 == pytest.approx(0.02261, abs=2e-5)
    assert d2 / d1 == pytest.approx(2.0, rel=1e-3)


def test_optimal_difference_independent_of_beta():
    a, _ = sweep.optimal_difference(0.05, D)
    b, _ = sweep.optimal_difference(0.1, D)
    assert abs(a - b) <= 1e-6


def test_optimal_difference_flat_objective():
    with pytest.raises(NoOptimumError):
        sweep.optimal_difference(0.1, D, theta=0.0)
    with pytest.raises(DomainError):
        sweep.optimal_difference(0.1, D, bracket=(0.1, 0.1))


def test_emit_csv_empty(tmp_path):
    path = tmp_path / "empty.csv"
    sweep.emit_csv([], path)
    assert path.read_bytes() == b"beta,diff,k_classical,k_quantum,gamma_eff_inv,status\n"


def test_emit_csv_three_rows_round_trip(tmp_path):
    rows = sweep.run_sweep(SweepPlan((0.1,), 0.0, 0.02, 0.01, D))
    path = tmp_path / "rows.csv"
    sweep.emit_csv(rows, path)
    data = path.read_bytes()
    assert b"\r" not in data and data.count(b"\n") == 4
    assert sweep.read_csv(path) == rows


def test_emit_csv_round_trips_nan(tmp_path):
    row = SweepRow(0.1, 0.0, math.nan, 0.0025, math.nan, "null-norm")
    path = tmp_path / "nan.csv"
    sweep.emit_csv([row], path)
    back = sweep.read_csv(path)[0]
    assert back.status == "null-norm" and math.isnan(back.k_quantum)


def test_emit_csv_unwritable_path(tmp_path):
    bad = tmp_path / "missing" / "rows.csv"
    with pytest.raises(OSError, match="missing"):
        sweep.emit_csv([], bad)


def test_plot_script_mentions_inputs():
    text = sweep.plot_script("sweep.csv", "optimal.csv", (0.02, 0.1), D)
    assert "sweep.csv" in text and "optimal.csv" in text
    assert text.count("beta = ") == 2
