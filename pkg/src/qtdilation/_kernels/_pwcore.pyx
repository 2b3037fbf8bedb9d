# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled clock-reading kernels. Same contract as ``_pwcore_py``."""
import numpy as np

from libc.math cimport cos, sin, M_PI

# steps between exact re-evaluation of the phase recurrence
DEF REANCHOR = 64


cdef inline void _phases(const double complex[::1] psi_p, const double[::1] s_p,
                         double t, double complex[::1] out) noexcept nogil:
    cdef Py_ssize_t n
    cdef double a
    for n in range(psi_p.shape[0]):
        a = -s_p[n] * t
        out[n] = psi_p[n] * (cos(a) + 1j * sin(a))


cdef void _fft_inplace(double complex[::1] x, const Py_ssize_t[::1] rev,
                       const double complex[::1] tw) noexcept nogil:
    """Unnormalized DFT with kernel exp(+2 pi i n k / d), d a power of two."""
    cdef Py_ssize_t d = x.shape[0]
    cdef Py_ssize_t i, j, size, half, step, start, m
    cdef double complex u, v
    for i in range(d):
        j = rev[i]
        if i < j:
            u = x[i]
            x[i] = x[j]
            x[j] = u
    size = 2
    while size <= d:
        half = size // 2
        step = d // size
        start = 0
        while start < d:
            for m in range(half):
                u = x[start + m]
                v = x[start + m + half] * tw[m * step]
                x[start + m] = u + v
                x[start + m + half] = u - v
            start += size
        size *= 2


cdef void _dft_direct(const double complex[::1] x, double complex[::1] y,
                      const double complex[::1] roots) noexcept nogil:
    cdef Py_ssize_t d = x.shape[0]
    cdef Py_ssize_t k, n
    cdef double complex acc
    for k in range(d):
        acc = 0
        for n in range(d):
            acc = acc + roots[(k * n) % d] * x[n]
        y[k] = acc


def reading_series(psi, spectrum, double t0, double dt, Py_ssize_t nt):
    """Clock-reading probabilities over a uniform time grid.

    ``out[j, k] = sum_p |<tau_k| exp(-i H t_j) |psi_p>|^2`` with
    ``t_j = t0 + j dt`` and ``<tau_k|E_n> = d^-1/2 exp(2 pi i n k / d)``.
    """
    cdef const double complex[:, ::1] psi_v = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const double[:, ::1] s_v = np.ascontiguousarray(spectrum, dtype=np.float64)
    cdef Py_ssize_t npts = psi_v.shape[0]
    cdef Py_ssize_t d = psi_v.shape[1]
    out_arr = np.zeros((nt, d), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef bint pow2 = d > 0 and (d & (d - 1)) == 0
    cdef Py_ssize_t bits = 0
    while (1 << bits) < d:
        bits += 1
    rev_arr = np.zeros(d, dtype=np.intp)
    for i in range(d):
        r = 0
        for b in range(bits):
            if i & (1 << b):
                r |= 1 << (bits - 1 - b)
        rev_arr[i] = r
    cdef const Py_ssize_t[::1] rev = rev_arr
    cdef const double complex[::1] roots = np.exp(2j * np.pi * np.arange(d) / d)

    cdef double complex[::1] x = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] y = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] step = np.empty(d, dtype=np.complex128)
    cdef double inv_d = 1.0 / d
    cdef Py_ssize_t p, j, n, k
    cdef double a

    with nogil:
        for p in range(npts):
            for n in range(d):
                a = -s_v[p, n] * dt
                step[n] = cos(a) + 1j * sin(a)
            for j in range(nt):
                if j % REANCHOR == 0:
                    _phases(psi_v[p], s_v[p], t0 + j * dt, x)
                if pow2:
                    for n in range(d):
                        y[n] = x[n]
                    _fft_inplace(y, rev, roots)
                else:
                    _dft_direct(x, y, roots)
                for k in range(d):
                    out[j, k] += (y[k].real * y[k].real + y[k].imag * y[k].imag) * inv_d
                for n in range(d):
                    x[n] = x[n] * step[n]
    return out_arr


def projected_series(psi, spectrum, bra, double t0, double dt, Py_ssize_t nt):
    """``out[j] = sum_p |sum_n bra[n] psi_pn exp(-i s_pn t_j)|^2`` on a uniform grid.

    ``bra[n]`` holds ``<tau|E_n>`` for the conditioning clock state.
    """
    cdef const double complex[:, ::1] psi_v = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const double[:, ::1] s_v = np.ascontiguousarray(spectrum, dtype=np.float64)
    cdef const double complex[::1] bra_v = np.ascontiguousarray(bra, dtype=np.complex128)
    cdef Py_ssize_t npts = psi_v.shape[0]
    cdef Py_ssize_t d = psi_v.shape[1]
    out_arr = np.zeros(nt, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double complex[::1] x = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] step = np.empty(d, dtype=np.complex128)
    cdef Py_ssize_t p, j, n
    cdef double a
    cdef double complex acc

    with nogil:
        for p in range(npts):
            for n in range(d):
                a = -s_v[p, n] * dt
                step[n] = cos(a) + 1j * sin(a)
            for j in range(nt):
                if j % REANCHOR == 0:
                    _phases(psi_v[p], s_v[p], t0 + j * dt, x)
                acc = 0
                for n in range(d):
                    acc = acc + bra_v[n] * x[n]
                    x[n] = x[n] * step[n]
                out[j] += acc.real * acc.real + acc.imag * acc.imag
    return out_arr
