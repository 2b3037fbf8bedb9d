import os
import subprocess
import sys

import numpy as np
import pytest

from qtdilation import _kernels
from qtdilation._kernels import _pwcore_py as pure

needs_compiled = pytest.mark.skipif(_kernels.compiled_backend is None, reason="compiled core not built")


def random_inputs(npts, d, seed=0):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(npts, d)) + 1j * rng.normal(size=(npts, d))
    psi /= np.linalg.norm(psi)
    spectrum = rng.uniform(0, 1e-3, size=(npts, d))
    bra = np.exp(1j * rng.uniform(0, 2 * np.pi, size=d)) / np.sqrt(d)
    return psi, spectrum, bra


def direct_readings(psi, spectrum, t):
    # brute force: explicit reading matrix, no FFT
    d = psi.shape[1]
    k = np.arange(d)
    rows = np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)
    amp = psi * np.exp(-1j * spectrum * t)
    return (np.abs(amp @ rows.T) ** 2).sum(axis=0)


@pytest.mark.parametrize("d", [8, 12, 64])
def test_pure_reading_series_matches_direct(d):
    psi, s, _ = random_inputs(5, d)
    out = pure.reading_series(psi, s, -300.0, 7.5, 4)
    for j in range(4):
        np.testing.assert_allclose(out[j], direct_readings(psi, s, -300.0 + 7.5 * j), rtol=1e-12, atol=1e-15)


def test_reading_series_conserves_probability():
    psi, s, _ = random_inputs(7, 16)
    out = pure.reading_series(psi, s, 0.0, 100.0, 10)
    np.testing.assert_allclose(out.sum(axis=1), 1.0, atol=1e-13)


@needs_compiled
@pytest.mark.parametrize("d", [8, 12, 64])
def test_backends_agree_reading_series(d):
    psi, s, _ = random_inputs(9, d, seed=d)
    # enough steps to cross the phase re-anchoring
    args = (psi, s, -5000.0, 13.0, 300)
    np.testing.assert_allclose(
        _kernels.compiled_backend.reading_series(*args), pure.reading_series(*args), rtol=1e-11, atol=1e-15
    )


@needs_compiled
@pytest.mark.parametrize("d", [8, 12, 64])
def test_backends_agree_projected_series(d):
    psi, s, bra = random_inputs(9, d, seed=d + 1)
    args = (psi, s, bra, -5000.0, 13.0, 300)
    np.testing.assert_allclose(
        _kernels.compiled_backend.projected_series(*args), pure.projected_series(*args), rtol=1e-11, atol=1e-15
    )


def run_backend_probe(env_value):
    env = dict(os.environ)
    env.pop("QTDILATION_PURE_PYTHON", None)
    if env_value is not None:
        env["QTDILATION_PURE_PYTHON"] = env_value
    code = "import qtdilation; print(qtdilation.KERNEL_BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_var_selects_pure_python():
    assert run_backend_probe("1") == "python"


@needs_compiled
def test_compiled_backend_is_default():
    assert run_backend_probe(None) == "cython"
    assert _kernels.BACKEND in ("cython", "python")
