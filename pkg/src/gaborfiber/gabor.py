"""Gabor systems ``G(g, a, b) = {M_{mb} T_{na} g}`` through their translate modules.

All computations live on one grid of spacing ``step`` for which both the
translation step ``a`` and the fiber period ``1/b`` are integer multiples
(``na`` and ``nb`` samples).  Translations by ``na * step`` and by
``k / b`` are then exact index shifts, and the correlation functions

* ``G_k^{h,g}(x) = sum_n h(x - na) conj(g(x - na - k/b))``  (period ``a``)
* ``Gamma_j(x) = sum_n g(x - n/b) conj(g(x - n/b - ja))``  (period ``1/b``)

are computed by exact folding of sample products.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _parallel, kernels
from .errors import ConditioningWarning, NotAFrameError, SnapWarning, TruncationWarning
from .hmod import FiberMatrixField, FrameBounds, ModuleVector, fiber_eigvalsh, frame_tol
from .schur import schur_conditions
from .spaces import (
    SNAP_RTOL,
    classify_space,
    defiberize,
    fiberize,
    from_samples,
    rational_ratio,
    rect,
    sample,
    trim,
)
from .valg import FiberField

__all__ = [
    "DEFAULT_M",
    "PARSEVAL_TOL",
    "WR_TOL",
    "COND_LIMIT",
    "Lattice",
    "BesselEstimates",
    "WexlerRazReport",
    "GaborAnalysis",
    "required_truncation",
    "default_truncation",
    "modulation_correlation",
    "translate_correlation",
    "bessel_estimates",
    "fiber_frame_matrix",
    "translate_gramian",
    "gabor_frame_bounds",
    "parseval_test",
    "dual_window",
    "wexler_raz_verify",
    "walnut_apply",
    "direct_frame_apply",
    "direct_frame_bounds",
    "analyze_system",
]

DEFAULT_M = 256
PARSEVAL_TOL = 1e-9
WR_TOL = 1e-8
COND_LIMIT = 1e12


class Lattice:
    """Lattice ``aZ x bZ`` together with its sampling grid.

    The grid step is ``(1/b) / M``.  When ``a`` is not a multiple of the step
    it is snapped to the nearest multiple and a :class:`SnapWarning` reports
    the distance.  Without an explicit ``M`` a rational ``ab = p/q`` picks
    the smallest multiple of ``q`` that is at least 256, so no snap occurs.
    """

    __slots__ = ("a", "b", "M", "a_requested", "snap_distance", "rational")

    def __init__(self, a, b, M=None):
        a, b = float(a), float(b)
        if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
            raise ValueError("lattice parameters must be positive and finite")
        if M is None:
            pq = rational_ratio(a * b)
            M = DEFAULT_M if pq is None else pq[1] * -(-DEFAULT_M // pq[1])
        M = int(M)
        if M < 1:
            raise ValueError("grid size M must be a positive integer")
        step = (1.0 / b) / M
        na = max(int(round(a / step)), 1)
        snap = abs(a - na * step)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a_requested", a)
        if snap > SNAP_RTOL * a:
            warnings.warn(
                SnapWarning(f"a = {a!r} snapped to {na * step!r} on the grid (distance {snap:.3e})"),
                stacklevel=2,
            )
            object.__setattr__(self, "a", na * step)
            object.__setattr__(self, "snap_distance", snap)
        else:
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "snap_distance", 0.0)
        object.__setattr__(self, "rational", rational_ratio(self.a * b))

    def __setattr__(self, name, value):
        raise AttributeError("Lattice is immutable")

    @property
    def step(self):
        return (1.0 / self.b) / self.M

    @property
    def period(self):
        """Fiber period ``1/b``."""
        return 1.0 / self.b

    @property
    def nb(self):
        return self.M

    @property
    def na(self):
        return int(round(self.a / self.step))

    @property
    def redundancy(self):
        """``1 / (ab)``."""
        return 1.0 / (self.a * self.b)

    def adjoint(self):
        """The adjoint lattice ``(1/b) Z x (1/a) Z`` on the same grid."""
        return Lattice(1.0 / self.b, 1.0 / self.a, M=self.na)

    def to_dict(self):
        return {
            "a": self.a,
            "b": self.b,
            "a_requested": self.a_requested,
            "M": self.M,
            "step": self.step,
            "na": self.na,
            "nb": self.nb,
            "snap_distance": self.snap_distance,
            "ab": self.a * self.b,
            "rational": list(self.rational) if self.rational else None,
        }

    def __repr__(self):
        return f"Lattice(a={self.a:g}, b={self.b:g}, M={self.M})"


def _samples(w, lat):
    s = sample(w, lat.step)
    return np.ascontiguousarray(s.values, dtype=complex), s.start


def _extent(lat, *windows):
    lo, hi = math.inf, -math.inf
    for w in windows:
        v, s = _samples(w, lat)
        nz = np.flatnonzero(v)
        if nz.size:
            lo = min(lo, (s + nz[0]) * lat.step)
            hi = max(hi, (s + nz[-1] + 1) * lat.step)
    if lo > hi:
        return 0.0, 0.0
    return lo, hi


def required_truncation(g, lat, h=None):
    """Smallest ``K`` for which every nonzero correlation and fiber entry is kept."""
    lo, hi = _extent(lat, g, *([h] if h is not None else []))
    width = hi - lo
    eps = 1e-9
    k_corr = math.ceil(width * lat.b - eps)
    j_corr = math.ceil(width / lat.a - eps)
    k_fiber = max(math.ceil(-lo * lat.b - eps), math.ceil(hi * lat.b - eps) - 1, 0)
    return int(max(k_corr, j_corr, k_fiber, 0))


def default_truncation(g, lat, h=None):
    return required_truncation(g, lat, h) + 2


def _truncation(g, lat, K, h=None):
    if K is None:
        return default_truncation(g, lat, h)
    need = required_truncation(g, lat, h)
    if K < need:
        warnings.warn(TruncationWarning(f"truncation K = {K} is below the support radius {need}"), stacklevel=3)
    return int(K)


def modulation_correlation(g, h, lat, k):
    """``G_k^{h,g}``, an ``a``-periodic field with ``na`` samples."""
    gv, gs = _samples(g, lat)
    hv, hs = _samples(h, lat)
    return FiberField(lat.a, kernels.fold_product(hv, hs, gv, gs, k * lat.nb, lat.na))


def translate_correlation(g, lat, j):
    """``Gamma_j = <g, T_{ja} g>_{1/b}``, a ``1/b``-periodic field with ``nb`` samples."""
    gv, gs = _samples(g, lat)
    return FiberField(lat.period, kernels.fold_product(gv, gs, gv, gs, j * lat.na, lat.nb))


def _G_stack(g, h, lat, ks):
    gv, gs = _samples(g, lat)
    hv, hs = _samples(h, lat)
    shifts = np.asarray(ks, dtype=np.intp) * lat.nb
    return kernels.correlation_stack(hv, hs, gv, gs, shifts, lat.na)


def _Gamma_stack(g, lat, js):
    gv, gs = _samples(g, lat)
    shifts = np.asarray(js, dtype=np.intp) * lat.na
    return kernels.correlation_stack(gv, gs, gv, gs, shifts, lat.nb)


class BesselEstimates(NamedTuple):
    cc: float
    daubechies: float
    dual_cc: float
    schur: float


def translate_gramian(g, lat, K=None):
    """Gramian of the translates ``Gamma_{jk}(x) = Gamma_{j-k}(x - ka)`` for ``|j|, |k| <= K``."""
    K = _truncation(g, lat, K)
    ds = np.arange(-2 * K, 2 * K + 1)
    Gam = _Gamma_stack(g, lat, ds)
    idx = np.arange(-K, K + 1)
    m = np.arange(lat.nb)
    d = idx[:, None] - idx[None, :] + 2 * K
    pos = (m[:, None] - idx[None, :] * lat.na) % lat.nb
    data = Gam[d[None, :, :], pos[:, None, :]]
    data = 0.5 * (data + np.conj(np.swapaxes(data, 1, 2)))
    return FiberMatrixField(lat.period, data, hermitian=True)


def bessel_estimates(g, lat, K=None):
    """Four upper Bessel bounds for ``G(g, a, b)``.

    Returns
    -------
    BesselEstimates
        ``cc = (1/b) sup sum_k |G_k|``, ``daubechies = (1/b) sum_k sup |G_k|``,
        ``dual_cc = (1/b) sup sum_j |Gamma_j|`` and ``schur``, the Schur bound of
        the translate Gramian times ``1/b``.
    """
    K = _truncation(g, lat, K)
    ks = np.arange(-K, K + 1)
    G = np.abs(_G_stack(g, g, lat, ks))
    Gam = np.abs(_Gamma_stack(g, lat, ks))
    inv_b = 1.0 / lat.b
    cc = inv_b * float(G.sum(axis=0).max())
    daub = inv_b * float(G.max(axis=1).sum())
    dual_cc = inv_b * float(Gam.sum(axis=0).max())
    # compact support: every row is a finite sum, so the fiberwise budgets apply
    schur = inv_b * schur_conditions(translate_gramian(g, lat, K), tail="norm_convergent").bound
    return BesselEstimates(cc, daub, dual_cc, schur)


def fiber_frame_matrix(g, h, lat, K=None):
    """Fiber matrices ``m_kj(x) = (1/b) G_{k-j}^{h,g}(x + k/b)`` for ``x`` in ``[0, 1/b)``."""
    if h is None:
        h = g
    K = _truncation(g, lat, K, h)
    ds = np.arange(-2 * K, 2 * K + 1)
    G = _G_stack(g, h, lat, ds)
    data = kernels.frame_matrix(G, -2 * K, K, lat.nb, lat.na, 1.0 / lat.b)
    if h is g:
        data = 0.5 * (data + np.conj(np.swapaxes(data, 1, 2)))
    return FiberMatrixField(lat.period, data, hermitian=h is g)


def gabor_frame_bounds(g, lat, K=None):
    """Frame bounds ``(A, B)`` as extreme eigenvalues over all fiber matrices."""
    ev = fiber_eigvalsh(fiber_frame_matrix(g, g, lat, K))
    return FrameBounds(max(float(ev[:, 0].min()), 0.0), float(ev[:, -1].max()))


def parseval_test(g, lat, K=None, tol=PARSEVAL_TOL):
    """Check ``G_0 = b`` and ``G_k = 0`` for ``0 < |k| <= K``.

    Returns
    -------
    passed : bool
    residuals : dict
        ``"G0"`` is ``sup |G_0 - b|`` and ``"Gk"`` is ``max_k sup |G_k|``.
    """
    K = _truncation(g, lat, K)
    ks = np.arange(-K, K + 1)
    G = _G_stack(g, g, lat, ks)
    r0 = float(np.max(np.abs(G[K] - lat.b)))
    others = np.delete(G, K, axis=0)
    rk = float(np.max(np.abs(others))) if others.size else 0.0
    return (r0 <= tol and rk <= tol), {"G0": r0, "Gk": rk}


def dual_window(g, lat, K=None):
    """Canonical dual window ``S^{-1} g`` from per-fiber solves.

    Raises
    ------
    NotAFrameError
        If the lower frame bound does not exceed ``frame_tol(B)``.

    Warns
    -----
    ConditioningWarning
        If some fiber matrix has condition number above ``COND_LIMIT``.
    """
    K = _truncation(g, lat, K)
    S = fiber_frame_matrix(g, g, lat, K)
    ev = fiber_eigvalsh(S)
    A, B = float(ev[:, 0].min()), float(ev[:, -1].max())
    if not A > frame_tol(B):
        raise NotAFrameError(f"lower frame bound {A:.3e} does not exceed frame_tol {frame_tol(B):.3e}")
    cond = ev[:, -1] / ev[:, 0]
    if np.max(cond) > COND_LIMIT:
        m = int(np.argmax(cond))
        warnings.warn(
            ConditioningWarning(f"fiber {m} has condition number {cond[m]:.3e}"), stacklevel=2
        )
    gcol = fiberize(g, lat.period, N=K, step=lat.step).columns
    H = _parallel.map_fibers(lambda T, c: np.linalg.solve(T, c[:, :, None])[:, :, 0], S.data, np.ascontiguousarray(gcol))
    return trim(defiberize(ModuleVector(lat.period, H.T)))


@dataclass(frozen=True)
class WexlerRazReport:
    inner: complex
    ab: float
    origin_residual: float
    off_origin_max: float
    Kmax: int
    Mmax: int
    tol: float

    @property
    def passed(self):
        return self.origin_residual <= self.tol and self.off_origin_max <= self.tol

    def to_dict(self):
        return {
            "inner_re": self.inner.real,
            "inner_im": self.inner.imag,
            "ab": self.ab,
            "origin_residual": self.origin_residual,
            "off_origin_max": self.off_origin_max,
            "Kmax": self.Kmax,
            "Mmax": self.Mmax,
            "tol": self.tol,
            "passed": self.passed,
        }


def wexler_raz_verify(g, h, lat, Kmax=6, Mmax=6, tol=WR_TOL):
    """Riemann-sum inner products ``<h, M_{m/a} T_{k/b} g>`` on the adjoint lattice.

    Dual windows satisfy ``<h, g> = ab`` and vanishing products off the origin.
    """
    gv, gs = _samples(g, lat)
    hv, hs = _samples(h, lat)
    ms = np.arange(-Mmax, Mmax + 1)
    vals = np.zeros((2 * Kmax + 1, ms.size), dtype=complex)
    for row, k in enumerate(range(-Kmax, Kmax + 1)):
        shift = k * lat.nb
        lo = max(hs, gs + shift)
        hi = min(hs + hv.size, gs + shift + gv.size)
        if lo >= hi:
            continue
        i = np.arange(lo, hi)
        prod = hv[lo - hs : hi - hs] * np.conj(gv[lo - shift - gs : hi - shift - gs])
        phase = np.exp(-2j * np.pi * np.outer(ms, i % lat.na) / lat.na)
        vals[row] = lat.step * (phase @ prod)
    inner = complex(vals[Kmax, Mmax])
    ab = lat.a * lat.b
    off = vals.copy()
    off[Kmax, Mmax] = 0.0
    return WexlerRazReport(inner, ab, abs(inner - ab), float(np.max(np.abs(off))), Kmax, Mmax, tol)


def walnut_apply(g, h, lat, f, K=None):
    """Walnut form ``(1/b) sum_{|k| <= K} G_k^{h,g} T_{k/b} f`` on the grid.

    Returns
    -------
    out : WindowSpec
        The truncated Walnut sum (sampled).
    tail : ndarray
        ``tail[K' - 1] = sup |sum_{K' < |k| <= K} (1/b) G_k^{h,g} T_{k/b} f|`` for
        ``K' = 1..K``: how much of the sum lies beyond index ``K'``.
    """
    if h is None:
        h = g
    K = _truncation(g, lat, K, h)
    gv, gs = _samples(g, lat)
    hv, hs = _samples(h, lat)
    fv, fs = _samples(f, lat)
    nb, na, scale = lat.nb, lat.na, 1.0 / lat.b
    out_start = fs - K * nb
    acc = np.zeros(fv.size + 2 * K * nb, dtype=complex)
    tail = np.zeros(K)

    def add(k):
        Gk = kernels.fold_product(hv, hs, gv, gs, k * nb, na)
        kernels.walnut_term(acc, out_start, Gk, fv, fs, k * nb, na, scale)

    for kp in range(K, 0, -1):
        tail[kp - 1] = float(np.max(np.abs(acc))) if acc.size else 0.0
        add(kp)
        add(-kp)
    add(0)
    return from_samples(acc, lat.step, start=out_start), tail


def _alias_modulations(lat, Mmax):
    full = np.arange(lat.nb) - lat.nb // 2
    if Mmax is None or 2 * Mmax + 1 >= lat.nb:
        return full
    return np.arange(-Mmax, Mmax + 1)


def direct_frame_apply(g, h, lat, f, Mmax=None, Nmax=None):
    """Brute-force ``sum_{m,n} <f, M_{mb} T_{na} g> M_{mb} T_{na} h``.

    Inner products are Riemann sums.  On the grid ``exp(2 pi i m b x)``
    repeats with period ``nb`` in ``m``, so by default ``m`` runs over one
    full period, which is the complete discretized lattice sum.  ``n`` runs
    over every translate meeting the support of ``f`` (or ``|n| <= Nmax``).
    """
    if h is None:
        h = g
    gv, gs = _samples(g, lat)
    hv, hs = _samples(h, lat)
    fv, fs = _samples(f, lat)
    nb, na, dx = lat.nb, lat.na, lat.step
    ms = _alias_modulations(lat, Mmax)
    W = np.exp(-2j * np.pi * np.outer(ms, np.arange(nb)) / nb)
    fe, ge, he = fs + fv.size, gs + gv.size, hs + hv.size
    n_lo = -((ge - 1 - fs) // na)
    n_hi = (fe - 1 - gs) // na
    if Nmax is not None:
        n_lo, n_hi = max(n_lo, -Nmax), min(n_hi, Nmax)
    out_lo = hs + n_lo * na
    out = np.zeros(max(he + n_hi * na - out_lo, 0), dtype=complex)
    for n in range(n_lo, n_hi + 1):
        lo, hi = max(fs, gs + n * na), min(fe, ge + n * na)
        if lo >= hi:
            continue
        i = np.arange(lo, hi)
        v = fv[lo - fs : hi - fs] * np.conj(gv[lo - n * na - gs : hi - n * na - gs])
        c = dx * (W[:, i % nb] @ v)
        j = np.arange(hs + n * na, he + n * na)
        out[j - out_lo] += (c @ np.conj(W[:, j % nb])) * hv
    return from_samples(out, dx, start=out_lo)


def direct_frame_bounds(g, lat, K=None, tol=1e-10):
    """Extreme squared singular values of the discretized analysis operator.

    The operator ``f -> (<f, M_{mb} T_{na} g>)_{m,n}`` is restricted to
    functions supported on ``[-K/b, (K+1)/b)`` (the domain covered by the
    fiber matrices of size ``2K+1``) and its Gram operator is handed to a
    Lanczos eigensolver without ever forming a matrix.
    """
    from scipy.sparse.linalg import LinearOperator, eigsh

    K = _truncation(g, lat, K)
    gv, gs = _samples(g, lat)
    nb, na = lat.nb, lat.na
    d0, d1 = -K * nb, (K + 1) * nb
    D = d1 - d0
    ms = _alias_modulations(lat, None)
    W = np.exp(-2j * np.pi * np.outer(ms, np.arange(nb)) / nb)
    root = math.sqrt(lat.step)
    ge = gs + gv.size
    blocks = []
    for n in range(-((ge - 1 - d0) // na), (d1 - 1 - gs) // na + 1):
        lo, hi = max(d0, gs + n * na), min(d1, ge + n * na)
        if lo < hi:
            i = np.arange(lo, hi)
            blocks.append((lo - d0, hi - d0, gv[lo - n * na - gs : hi - n * na - gs], i % nb))

    WH = np.conj(W)

    def gram(u):
        u = np.asarray(u).reshape(-1)
        out = np.zeros(D, dtype=complex)
        for lo, hi, gseg, r in blocks:
            # group the Riemann sum by residue class before applying the phases
            v = np.conj(gseg) * u[lo:hi]
            folded = np.bincount(r, v.real, nb) + 1j * np.bincount(r, v.imag, nb)
            c = root * (W @ folded)
            out[lo:hi] += root * gseg * (c @ WH)[r]
        return out

    op = LinearOperator((D, D), matvec=gram, dtype=complex)
    ncv = min(D - 1, 96)
    top = eigsh(op, k=1, which="LA", tol=tol, ncv=ncv, return_eigenvectors=False)
    bottom = eigsh(op, k=1, which="SA", tol=tol, ncv=ncv, return_eigenvectors=False)
    return FrameBounds(max(float(bottom[0]), 0.0), float(top[0]))


@dataclass
class GaborAnalysis:
    """Report of :func:`analyze_system`."""

    frame_lower: float
    frame_upper: float
    cc_bound: Optional[float]
    daubechies_bound: Optional[float]
    dual_cc_bound: Optional[float]
    schur_bound: Optional[float]
    parseval: bool
    parseval_residuals: dict
    truncation: int
    fiber_count: int
    walnut_tail: list
    lattice: dict
    x_membership: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    backend: str = kernels.BACKEND

    @property
    def kind(self):
        return FrameBounds(self.frame_lower, self.frame_upper).kind

    def to_dict(self):
        return {
            "frame_lower": self.frame_lower,
            "frame_upper": self.frame_upper,
            "kind": self.kind,
            "cc_bound": self.cc_bound,
            "daubechies_bound": self.daubechies_bound,
            "dual_cc_bound": self.dual_cc_bound,
            "schur_bound": self.schur_bound,
            "parseval": self.parseval,
            "parseval_residuals": dict(self.parseval_residuals),
            "truncation": self.truncation,
            "fiber_count": self.fiber_count,
            "walnut_tail": list(self.walnut_tail),
            "lattice": dict(self.lattice),
            "x_membership": dict(self.x_membership),
            "warnings": list(self.warnings),
            "backend": self.backend,
        }


def analyze_system(g, lat, K=None, f=None, parseval_tol=PARSEVAL_TOL):
    """Bounds, estimators, Parseval verdict and Walnut tail of ``G(g, a, b)``.

    ``f`` is the test function for the Walnut tail profile; it defaults to
    the indicator of ``[0, 1/b)``.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        K = _truncation(g, lat, K)
        A, B = gabor_frame_bounds(g, lat, K)
        est = bessel_estimates(g, lat, K)
        ok, res = parseval_test(g, lat, K, tol=parseval_tol)
        _, tail = walnut_apply(g, g, lat, f if f is not None else rect(0.0, lat.period), K)
        xm = {
            "a": classify_space(g, lat.a, lat.step).in_X.value,
            "1/b": classify_space(g, lat.period, lat.step).in_X.value,
        }
    notes = [str(w.message) for w in caught]
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    return GaborAnalysis(
        frame_lower=A,
        frame_upper=B,
        cc_bound=est.cc,
        daubechies_bound=est.daubechies,
        dual_cc_bound=est.dual_cc,
        schur_bound=est.schur,
        parseval=ok,
        parseval_residuals=res,
        truncation=K,
        fiber_count=lat.M,
        walnut_tail=tail.tolist(),
        lattice=lat.to_dict(),
        x_membership=xm,
        warnings=notes,
    )
