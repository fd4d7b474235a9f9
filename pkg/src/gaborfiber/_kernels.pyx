# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled periodization kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np


cdef inline Py_ssize_t _pmod(Py_ssize_t i, Py_ssize_t n) nogil:
    cdef Py_ssize_t r = i % n
    if r < 0:
        r += n
    return r


cdef void _fold(const double complex[::1] h, Py_ssize_t h_start,
                const double complex[::1] g, Py_ssize_t g_start,
                Py_ssize_t shift, Py_ssize_t period, double complex[::1] out) noexcept nogil:
    cdef Py_ssize_t lo = h_start if h_start > g_start + shift else g_start + shift
    cdef Py_ssize_t h_end = h_start + h.shape[0]
    cdef Py_ssize_t g_end = g_start + shift + g.shape[0]
    cdef Py_ssize_t hi = h_end if h_end < g_end else g_end
    cdef Py_ssize_t i, r
    cdef double complex a, b
    if lo >= hi:
        return
    r = _pmod(lo, period)
    for i in range(lo, hi):
        a = h[i - h_start]
        b = g[i - shift - g_start]
        out[r] = out[r] + (a.real * b.real + a.imag * b.imag) + 1j * (a.imag * b.real - a.real * b.imag)
        r += 1
        if r == period:
            r = 0


def fold_product(h, Py_ssize_t h_start, g, Py_ssize_t g_start, Py_ssize_t shift, Py_ssize_t period):
    cdef const double complex[::1] hv = np.ascontiguousarray(h, dtype=complex)
    cdef const double complex[::1] gv = np.ascontiguousarray(g, dtype=complex)
    out = np.zeros(period, dtype=complex)
    cdef double complex[::1] ov = out
    with nogil:
        _fold(hv, h_start, gv, g_start, shift, period, ov)
    return out


def correlation_stack(h, Py_ssize_t h_start, g, Py_ssize_t g_start, shifts, Py_ssize_t period):
    cdef const double complex[::1] hv = np.ascontiguousarray(h, dtype=complex)
    cdef const double complex[::1] gv = np.ascontiguousarray(g, dtype=complex)
    cdef Py_ssize_t[::1] sv = np.ascontiguousarray(shifts, dtype=np.intp)
    out = np.zeros((sv.shape[0], period), dtype=complex)
    cdef double complex[:, ::1] ov = out
    cdef Py_ssize_t row
    with nogil:
        for row in range(sv.shape[0]):
            _fold(hv, h_start, gv, g_start, sv[row], period, ov[row])
    return out


def frame_matrix(G, Py_ssize_t dmin, Py_ssize_t K, Py_ssize_t nb, Py_ssize_t na, double scale):
    cdef const double complex[:, ::1] Gv = np.ascontiguousarray(G, dtype=complex)
    cdef Py_ssize_t D = 2 * K + 1
    out = np.empty((nb, D, D), dtype=complex)
    cdef double complex[:, :, ::1] ov = out
    cdef Py_ssize_t m, k, j, pos
    with nogil:
        for m in range(nb):
            for k in range(-K, K + 1):
                pos = _pmod(m + k * nb, na)
                for j in range(-K, K + 1):
                    ov[m, k + K, j + K] = scale * Gv[k - j - dmin, pos]
    return out


def walnut_term(out, Py_ssize_t out_start, Gk, f, Py_ssize_t f_start, Py_ssize_t shift,
                Py_ssize_t na, double scale):
    cdef double complex[::1] ov = out
    cdef const double complex[::1] Gv = np.ascontiguousarray(Gk, dtype=complex)
    cdef const double complex[::1] fv = np.ascontiguousarray(f, dtype=complex)
    cdef Py_ssize_t lo = out_start if out_start > f_start + shift else f_start + shift
    cdef Py_ssize_t o_end = out_start + ov.shape[0]
    cdef Py_ssize_t f_end = f_start + shift + fv.shape[0]
    cdef Py_ssize_t hi = o_end if o_end < f_end else f_end
    cdef Py_ssize_t i, r
    if lo >= hi:
        return
    with nogil:
        r = _pmod(lo, na)
        for i in range(lo, hi):
            ov[i - out_start] = ov[i - out_start] + scale * Gv[r] * fv[i - shift - f_start]
            r += 1
            if r == na:
                r = 0
