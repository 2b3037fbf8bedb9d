import math
import warnings

import numpy as np
import pytest

from qtdilation import dilation as dl
from qtdilation import pwsim, wavepacket as wp
from qtdilation.comparison import compare, mean_tolerance
from qtdilation.dilation import Scenario
from qtdilation.errors import ConfigurationError, DomainError
from qtdilation.pwsim import AmbiguousReadingWarning, ConditionalDistribution, FiniteClock

D = 0.01


def superposed(theta=math.pi / 4, phi=0.0, tau_b=1.0):
    return Scenario.build(theta, phi, 0.04, 0.06, 0.04, D, tau_b=tau_b)


@pytest.fixture(scope="module")
def model():
    return pwsim.build_model(superposed())


@pytest.mark.parametrize("d", [8, 32, 64])
def test_resolution_of_identity(d):
    c = FiniteClock(d, 1e-3 / (d - 1))
    rows = c.reading_matrix()
    np.testing.assert_allclose(rows.conj().T @ rows, np.eye(d), atol=1e-10)
    # same states as |tau_k> built from the definition
    for k in (0, 1, d - 1):
        np.testing.assert_allclose(rows[k].conj(), c.state(c.readings[k]), atol=1e-12)


@pytest.mark.parametrize("d", [8, 32, 64])
def test_clock_covariance(d):
    c = FiniteClock(d, 1e-3 / (d - 1))
    step = c.period / d
    for k in (0, 3, d - 1):
        shifted = c.evolve(c.state(c.readings[k]), step)
        np.testing.assert_allclose(shifted, c.state(c.readings[(k + 1) % d]), atol=1e-13)


def test_clock_validation():
    with pytest.raises(DomainError):
        FiniteClock(0, 1e-4)
    with pytest.raises(DomainError):
        FiniteClock(8, 0.0)


def test_localized_state_reads_its_time():
    c = FiniteClock(64, 1e-3 / 63)
    probs = c.reading_probabilities(c.localized_state(c.readings[10]))
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.argmax(probs) == 10


def test_default_build_is_normalized(model):
    assert model.norm() == pytest.approx(1.0, abs=1e-10)
    assert model.clock_a.dim == 64 and model.grid_a.size == 256


def test_spectrum_matches_formula(model):
    mass = 1.0 + model.clock_a.energies
    i, n = 17, 40
    assert model.spectrum_a[i, n] == math.sqrt(model.grid_a[i] ** 2 + mass[n] ** 2)
    rel = model.spectrum_a - model.spectrum_a[:, :1]
    np.testing.assert_allclose(model.relative_spectrum_a, rel, rtol=1e-8, atol=1e-18)


def test_marginal_density_matches_sample_density(model):
    ref = wp.sample_density(model.scenario.sup_a, model.grid_a)
    np.testing.assert_allclose(model.momentum_density_a(), ref, atol=1e-6)


def test_rest_frame_spectra_reduce_to_clock_energies():
    m = pwsim.build_model(Scenario.build(0.0, 0.0, 0.0, 0.0, 0.0, D), grid_points=257)
    centre = np.argmin(abs(m.grid_a))
    assert abs(m.grid_a[centre]) < 1e-15
    np.testing.assert_allclose(m.spectrum_a[centre], 1.0 + m.clock_a.energies, rtol=1e-15)


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(d_a=64, d_b=64, epsilon=0.5 / 63), "nonrelativistic"),
        (dict(d_a=4, d_b=64), "dimension"),
        (dict(grid_points=64), "too coarse"),
        (dict(nodes=10), "nodes"),
        (dict(clock_state="wobbly"), "clock_state"),
    ],
)
def test_build_rejections(kwargs, fragment):
    with pytest.raises(ConfigurationError, match=fragment):
        pwsim.build_model(superposed(), **kwargs)


def test_rest_frame_peak_at_zero():
    m = pwsim.build_model(Scenario.build(0.0, 0.0, 0.0, 0.0, 0.0, D, tau_b=0.0))
    cd = pwsim.conditional_distribution(m, 0.0)
    assert np.argmax(cd.probabilities) == 0
    assert pwsim.mean_reading(cd) == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("d", [8, 32, 64])
def test_conditional_normalized_and_covariant(d):
    sc = superposed()
    m = pwsim.build_model(sc, d_a=d, d_b=d)
    step = m.clock_b.period / d
    shifted = pwsim.build_model(sc, d_a=d, d_b=d, start_a=step, start_b=step)
    tau_b = 0.3 * m.clock_b.period
    p = pwsim.conditional_distribution(m, tau_b).probabilities
    q = pwsim.conditional_distribution(shifted, tau_b + step).probabilities
    assert np.all(p >= 0)
    assert abs(p.sum() - 1.0) <= 1e-9
    np.testing.assert_allclose(q, np.roll(p, 1), atol=1e-14)


def test_special_relativity_baseline():
    sc = Scenario.build(0.0, 0.0, 0.05, 0.05, 0.0, D)
    m = pwsim.build_model(sc)
    for f in (0.1, 0.3, 0.6):
        tau_b = f * m.clock_b.period
        mean = pwsim.mean_reading(pwsim.conditional_distribution(m, tau_b))
        assert abs(mean - dl.sr_baseline(0.05, 0.0, tau_b)) <= mean_tolerance(m, tau_b)


def test_tau_b_out_of_range(model):
    with pytest.raises(DomainError):
        pwsim.conditional_distribution(model, model.clock_b.period)
    with pytest.raises(DomainError):
        pwsim.conditional_distribution(model, -1.0)


def synthetic(probs, tau_b=0.0, period=64.0):
    probs = np.asarray(probs, dtype=float)
    return ConditionalDistribution(np.arange(probs.size) * period / probs.size, probs, tau_b, period)


def test_mean_reading_delta():
    p = np.zeros(64)
    p[9] = 1.0
    assert pwsim.mean_reading(synthetic(p, tau_b=9.0)) == pytest.approx(9.0, abs=1e-12)
    # unwrapped to the branch nearest tau_b
    assert pwsim.mean_reading(synthetic(p, tau_b=70.0)) == pytest.approx(73.0, abs=1e-12)


def test_mean_reading_symmetric_pair():
    p = np.zeros(64)
    p[20] = p[30] = 0.5
    assert pwsim.mean_reading(synthetic(p, tau_b=25.0)) == pytest.approx(25.0, abs=1e-12)


def test_mean_reading_narrow_matches_naive():
    tau = np.arange(4096) * (1000.0 / 4096)
    p = np.exp(-((tau - 400.3) ** 2) / (2 * 5.0**2))
    p /= p.sum()
    cd = ConditionalDistribution(tau, p, 400.0, 1000.0)
    assert abs(pwsim.mean_reading(cd) - float(np.dot(p, tau))) <= 1e-9


def test_mean_reading_wide_warns():
    with pytest.warns(AmbiguousReadingWarning):
        pwsim.mean_reading(synthetic(np.full(64, 1 / 64)))


def test_mixture_trivial_weights(model):
    tau_b = 0.2 * model.clock_b.period
    same = pwsim.build_model(superposed())
    base = pwsim.conditional_distribution(model, tau_b).probabilities
    np.testing.assert_array_equal(pwsim.mixture_distribution(model, same, 1.0, tau_b).probabilities, base)
    np.testing.assert_allclose(
        pwsim.mixture_distribution(model, same, 0.5, tau_b).probabilities, base, rtol=1e-13, atol=1e-16
    )


def test_mixture_validation(model):
    other = pwsim.build_model(superposed(), d_a=32)
    with pytest.raises(DomainError):
        pwsim.mixture_distribution(model, other, 0.5, 1.0)
    with pytest.raises(DomainError):
        pwsim.mixture_distribution(model, model, 1.5, 1.0)


@pytest.mark.parametrize("phi", [0.0, 1.0])
def test_mixture_mean_is_classical(phi):
    sc = superposed(phi=phi)
    m1, m2 = pwsim.branch_models(sc)
    tau_b = 0.4 * m1.clock_b.period
    mean = pwsim.mean_reading(pwsim.mixture_distribution(m1, m2, 0.5, tau_b))
    k_cl = dl.k_classical(sc.sup_a.theta, 0.04, 0.06, 0.04)
    assert abs(mean - (1.0 - k_cl) * tau_b) <= mean_tolerance(m1, tau_b)


def test_oracle_agrees_with_closed_form():
    rows = compare(superposed(), (0.15, 0.45, 0.75), mixture=True)
    for row in rows:
        assert row.passed, row
        assert row.shift_passed, row


def test_uncertainty_eigenstate_not_applicable():
    c = FiniteClock(64, 1e-3 / 63)
    amp = np.zeros(64, complex)
    amp[5] = 1.0
    check = pwsim.clock_uncertainty(c, amp)
    assert not check.applicable and check.bound == 0.5


def test_uncertainty_gaussian_saturates():
    c = FiniteClock(64, 1e-3 / 63)
    check = pwsim.clock_uncertainty(c, c.localized_state(0.3 * c.period, 4.0))
    assert check.applicable
    assert check.product >= 0.5 * 0.9
    assert check.product == pytest.approx(0.5, rel=0.1)


def test_uncertainty_seam_warns():
    c = FiniteClock(64, 1e-3 / 63)
    amp = c.localized_state(0.0, 4.0) + 0.5 * c.localized_state(0.5 * c.period, 4.0)
    with pytest.warns(AmbiguousReadingWarning):
        assert not pwsim.clock_uncertainty(c, amp).applicable


def test_uncertainty_diagnostic_on_model(model):
    check = pwsim.uncertainty_diagnostic(model)
    assert check.applicable and check.product >= 0.45
