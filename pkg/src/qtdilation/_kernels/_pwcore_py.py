"""Pure-numpy clock-reading kernels (fallback for the compiled core)."""
import numpy as np

_CHUNK_ELEMENTS = 1 << 21


def _chunks(nt, row_size):
    step = max(1, _CHUNK_ELEMENTS // max(row_size, 1))
    for start in range(0, nt, step):
        yield start, min(nt, start + step)


def reading_series(psi, spectrum, t0, dt, nt):
    psi = np.asarray(psi, dtype=np.complex128)
    s = np.asarray(spectrum, dtype=np.float64)
    npts, d = psi.shape
    out = np.empty((nt, d))
    for lo, hi in _chunks(nt, npts * d):
        t = t0 + np.arange(lo, hi) * dt
        amp = psi[None] * np.exp(-1j * s[None] * t[:, None, None])
        # ifft carries 1/d; the reading amplitude needs d^-1/2
        y = np.fft.ifft(amp, axis=-1) * np.sqrt(d)
        out[lo:hi] = (y.real**2 + y.imag**2).sum(axis=1)
    return out


def projected_series(psi, spectrum, bra, t0, dt, nt):
    psi = np.asarray(psi, dtype=np.complex128)
    s = np.asarray(spectrum, dtype=np.float64)
    bra = np.asarray(bra, dtype=np.complex128)
    npts, d = psi.shape
    weighted = psi * bra[None]
    out = np.empty(nt)
    for lo, hi in _chunks(nt, npts * d):
        t = t0 + np.arange(lo, hi) * dt
        acc = (weighted[None] * np.exp(-1j * s[None] * t[:, None, None])).sum(axis=-1)
        out[lo:hi] = (acc.real**2 + acc.imag**2).sum(axis=1)
    return out
