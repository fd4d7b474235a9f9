"""Pure numpy implementation of the periodization kernels.

Mirrors the compiled ``_kernels`` extension one-for-one; it is selected
automatically when the extension is unavailable.
"""
import numpy as np


def fold_product(h, h_start, g, g_start, shift, period):
    """``out[r] = sum_{i = r mod period} h[i - h_start] * conj(g[i - shift - g_start])``."""
    out = np.zeros(period, dtype=complex)
    lo = max(h_start, g_start + shift)
    hi = min(h_start + h.shape[0], g_start + shift + g.shape[0])
    if lo >= hi:
        return out
    prod = h[lo - h_start : hi - h_start] * np.conj(g[lo - shift - g_start : hi - shift - g_start])
    r0 = lo % period
    total = r0 + prod.shape[0]
    rows = -(-total // period)
    buf = np.zeros(rows * period, dtype=complex)
    buf[r0:total] = prod
    return buf.reshape(rows, period).sum(axis=0)


def correlation_stack(h, h_start, g, g_start, shifts, period):
    out = np.zeros((len(shifts), period), dtype=complex)
    for row, s in enumerate(shifts):
        out[row] = fold_product(h, h_start, g, g_start, int(s), period)
    return out


def frame_matrix(G, dmin, K, nb, na, scale):
    """``out[m, k+K, j+K] = scale * G[k - j - dmin, (m + k*nb) mod na]``."""
    ks = np.arange(-K, K + 1)
    m = np.arange(nb)
    d = ks[:, None] - ks[None, :] - dmin
    pos = (m[:, None] + ks[None, :] * nb) % na
    return scale * G[d[None, :, :], pos[:, :, None]]


def walnut_term(out, out_start, Gk, f, f_start, shift, na, scale):
    """In place: ``out[i - out_start] += scale * Gk[i mod na] * f[i - shift - f_start]``."""
    lo = max(out_start, f_start + shift)
    hi = min(out_start + out.shape[0], f_start + shift + f.shape[0])
    if lo >= hi:
        return
    idx = np.arange(lo, hi) % na
    out[lo - out_start : hi - out_start] += scale * Gk[idx] * f[lo - shift - f_start : hi - shift - f_start]
