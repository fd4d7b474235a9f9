"""Windows on the real line and the translate modules L_P^inf(l^2).

Every window is evaluated on a uniform grid ``x_i = i * step`` with a
left-endpoint convention: sample ``i`` stands for the cell
``[x_i, x_i + step)``.  Piecewise-constant windows whose breakpoints sit on
the grid are therefore represented exactly.

Sampled windows are combined only on a common grid; a period ``P`` is
usable only when ``P / step`` is an integer, which makes translations by
multiples of ``P`` exact index shifts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .errors import AlignmentError, TruncationError
from .hmod import DEFAULT_N, ModuleVector
from .valg import FiberField

__all__ = [
    "KINDS",
    "DEFAULT_M",
    "EPS_TAIL",
    "TailModel",
    "WindowSpec",
    "Sampled",
    "Verdict",
    "SpaceMembership",
    "rect",
    "hat",
    "gaussian",
    "exponential",
    "paper_window",
    "from_samples",
    "builtin",
    "sample",
    "grid_ratio",
    "resolve_step",
    "bracket_product",
    "fiberize",
    "defiberize",
    "trim",
    "translate",
    "dilate",
    "dilate_module",
    "module_action",
    "lp_l2_norm",
    "w2_norm",
    "l2_norm",
    "rational_ratio",
    "norm_equivalence_factors",
    "classify_space",
]

KINDS = ("gaussian", "rect", "hat", "exponential", "samples", "paper_f1", "paper_f2", "paper_f3")
PAPER_KINDS = {"paper_f1": 1.0, "paper_f2": 0.5, "paper_f3": 0.0}
DEFAULT_M = 256
EPS_TAIL = 1e-12
SNAP_RTOL = 1e-9
MAX_DENOMINATOR = 10_000


@dataclass(frozen=True)
class TailModel:
    """Analytic per-cell essential sups ``n -> c_n`` for ``n >= 0``.

    ``law="power"`` gives ``c_n = scale * (n + 1) ** -rate`` and
    ``law="exponential"`` gives ``c_n = scale * exp(-rate * n)``.  Cells have
    length ``period``.  ``overlap`` is the largest number of cell pieces
    that are simultaneously nonzero at one fiber point (``None`` if unknown).
    """

    law: str
    rate: float
    scale: float = 1.0
    period: float = 1.0
    overlap: Optional[int] = 1

    def __post_init__(self):
        if self.law not in ("power", "exponential"):
            raise ValueError(f"unknown tail law {self.law!r}")
        if self.scale < 0:
            raise ValueError("cell sups must be nonnegative")
        if self.law == "exponential" and self.rate <= 0:
            raise ValueError("exponential tail needs a positive rate")

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if self.law == "power":
            return self.scale * (n + 1.0) ** (-self.rate)
        return self.scale * np.exp(-self.rate * n)

    @property
    def summable(self):
        return self.law == "exponential" or self.rate > 1.0 or self.scale == 0

    @property
    def square_summable(self):
        return self.law == "exponential" or 2.0 * self.rate > 1.0 or self.scale == 0

    @property
    def vanishing(self):
        return self.law == "exponential" or self.rate > 0.0 or self.scale == 0

    @property
    def bounded(self):
        return self.law == "exponential" or self.rate >= 0.0

    def square_sum(self):
        """``sum_n c_n^2`` (finite only when square summable)."""
        if not self.square_summable:
            return math.inf
        if self.law == "exponential":
            return self.scale**2 / (1.0 - math.exp(-2.0 * self.rate))
        s = 2.0 * self.rate
        n = 100_000
        head = float(np.sum(np.arange(1, n + 1, dtype=float) ** -s))
        # Euler-Maclaurin remainder of the zeta tail
        tail = n ** (1.0 - s) / (s - 1.0) - 0.5 * n ** (-s)
        return self.scale**2 * (head + tail)

    def rescaled(self, factor):
        return replace(self, period=self.period * factor)

    def to_dict(self):
        return {
            "law": self.law,
            "rate": self.rate,
            "scale": self.scale,
            "period": self.period,
            "overlap": self.overlap,
        }


class Sampled(NamedTuple):
    """Grid samples ``values[i - start]`` at ``x_i = i * step``."""

    start: int
    values: np.ndarray
    step: float

    @property
    def stop(self):
        return self.start + self.values.shape[0]

    @property
    def x(self):
        return (self.start + np.arange(self.values.shape[0])) * self.step


@dataclass(frozen=True, eq=False)
class WindowSpec:
    """An analytic or sampled window on the real line.

    Analytic kinds are evaluated as ``base((x - shift) * dilation)``.  For
    ``kind="samples"`` the payload is ``samples`` on the grid of spacing
    ``step`` starting at grid index ``start``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    shift: float = 0.0
    dilation: float = 1.0
    cell_sups: Optional[TailModel] = None
    samples: Optional[np.ndarray] = None
    step: Optional[float] = None
    start: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "samples":
            if self.samples is None or self.step is None:
                raise ValueError("sampled windows need samples and step")
            arr = np.array(self.samples, dtype=complex).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, "samples", arr)
            object.__setattr__(self, "start", int(self.start))
        if self.dilation <= 0:
            raise ValueError("dilation must be positive")

    @property
    def is_sampled(self):
        return self.kind == "samples"

    @property
    def compact(self):
        """True when the window itself (not just its truncation) has compact support."""
        if self.kind in ("rect", "hat", "samples"):
            return True
        if self.kind in PAPER_KINDS:
            return self.params.get("bumps") is not None
        return False

    def _local_support(self, step=None):
        p = self.params
        if self.kind in ("rect", "hat"):
            c, w = p["center"], p["width"]
            return c - w / 2.0, c + w / 2.0
        if self.kind == "gaussian":
            c, w, s = p["center"], p["width"], p["scale"]
            r = w * math.sqrt(max(math.log(abs(s) / p.get("eps", EPS_TAIL)), 0.0) / math.pi)
            return c - r, c + r
        if self.kind == "exponential":
            c, w, s = p["center"], p["width"], p["scale"]
            r = w * max(math.log(abs(s) / p.get("eps", EPS_TAIL)), 0.0)
            return c - r, c + r
        if self.kind in PAPER_KINDS:
            n = self._bumps(step)
            if n is None:
                return 0.0, math.inf
            return 0.0, float(n) + 1.0
        raise AssertionError

    def _bumps(self, step):
        n = self.params.get("bumps")
        if n is not None:
            return int(n)
        if step is None:
            return None
        # keep bump n while its width 2^(-n-1) (in x units) is at least one step
        local = step * self.dilation
        return max(int(math.floor(-math.log2(local) - 1.0 + 1e-12)) + 1, 1)

    def support(self, step=None):
        """Closed interval outside of which the (tail-truncated) window vanishes."""
        if self.is_sampled:
            return self.start * self.step, (self.start + self.samples.size) * self.step
        lo, hi = self._local_support(step)
        return lo / self.dilation + self.shift, hi / self.dilation + self.shift

    def evaluate(self, x, step=None):
        """Pointwise values at the points ``x``."""
        x = np.asarray(x, dtype=float)
        if self.is_sampled:
            idx = np.floor(x / self.step + 1e-9).astype(np.int64) - self.start
            out = np.zeros(x.shape, dtype=complex)
            ok = (idx >= 0) & (idx < self.samples.size)
            out[ok] = self.samples[idx[ok]]
            return out
        u = (x - self.shift) * self.dilation
        p = self.params
        if self.kind == "rect":
            lo, hi = self._local_support()
            return np.where((u >= lo) & (u < hi), p["scale"], 0.0).astype(complex)
        if self.kind == "hat":
            half = p["width"] / 2.0
            return (p["scale"] * np.clip(1.0 - np.abs(u - p["center"]) / half, 0.0, None)).astype(complex)
        if self.kind == "gaussian":
            lo, hi = self._local_support()
            v = p["scale"] * np.exp(-math.pi * ((u - p["center"]) / p["width"]) ** 2)
            return np.where((u >= lo) & (u < hi), v, 0.0).astype(complex)
        if self.kind == "exponential":
            lo, hi = self._local_support()
            v = p["scale"] * np.exp(-np.abs(u - p["center"]) / p["width"])
            return np.where((u >= lo) & (u < hi), v, 0.0).astype(complex)
        # bump windows: height c_n on [n + 1 - 2^-n, n + 1 - 2^-(n+1))
        nb = self._bumps(step)
        if nb is None:
            raise TruncationError("bump windows need a step or an explicit bump count to be evaluated")
        out = np.zeros(u.shape, dtype=complex)
        heights = self.cell_sups(np.arange(nb))
        cell = np.floor(u).astype(np.int64)
        frac = u - cell
        ok = (cell >= 0) & (cell < nb)
        n = cell[ok]
        inside = (frac[ok] >= 1.0 - 2.0 ** (-n.astype(float))) & (frac[ok] < 1.0 - 2.0 ** (-n.astype(float) - 1.0))
        vals = np.where(inside, heights[n], 0.0)
        out[ok] = vals * self.params.get("scale", 1.0)
        return out

    def to_dict(self):
        d = {"kind": self.kind, "params": dict(self.params)}
        if self.shift:
            d["shift"] = self.shift
        if self.dilation != 1.0:
            d["dilation"] = self.dilation
        if self.cell_sups is not None:
            d["cell_sups"] = self.cell_sups.to_dict()
        if self.is_sampled:
            d["step"] = self.step
            d["start"] = self.start
            d["samples"] = {"re": self.samples.real.tolist(), "im": self.samples.imag.tolist()}
        else:
            lo, hi = self.support()
            d["support"] = [lo, hi]
        return d

    def __repr__(self):
        if self.is_sampled:
            return f"WindowSpec(samples, n={self.samples.size}, step={self.step:g}, start={self.start})"
        return f"WindowSpec({self.kind}, {self.params}, shift={self.shift:g}, dilation={self.dilation:g})"

    def __add__(self, other):
        a, b = sample(self), sample(other, (self.step if self.is_sampled else None))
        return _combine(a, b, 1.0)

    def __sub__(self, other):
        a, b = sample(self), sample(other, (self.step if self.is_sampled else None))
        return _combine(a, b, -1.0)

    def __mul__(self, scalar):
        if self.is_sampled:
            return replace(self, samples=self.samples * complex(scalar))
        p = dict(self.params)
        p["scale"] = p.get("scale", 1.0) * scalar
        return replace(self, params=p)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)


def _combine(a, b, sign):
    if not math.isclose(a.step, b.step, rel_tol=1e-12):
        raise AlignmentError("windows live on different grids")
    lo, hi = min(a.start, b.start), max(a.stop, b.stop)
    out = np.zeros(hi - lo, dtype=complex)
    out[a.start - lo : a.stop - lo] += a.values
    out[b.start - lo : b.stop - lo] += sign * b.values
    return from_samples(out, a.step, start=lo)


# constructors


def rect(lo=0.0, hi=1.0, scale=1.0):
    """``scale`` times the indicator of ``[lo, hi)``."""
    return WindowSpec("rect", {"center": 0.5 * (lo + hi), "width": hi - lo, "scale": scale})


def hat(lo=0.0, hi=2.0, scale=1.0):
    """Triangle on ``[lo, hi]`` peaking at the midpoint with height ``scale``."""
    return WindowSpec("hat", {"center": 0.5 * (lo + hi), "width": hi - lo, "scale": scale})


def gaussian(center=0.0, width=1.0, scale=None, eps=EPS_TAIL):
    """``scale * exp(-pi ((x - center) / width)^2)``, L^2-normalized by default.

    The window is cut where it drops below ``eps``.
    """
    if scale is None:
        scale = 2.0**0.25 / math.sqrt(width)
    return WindowSpec(
        "gaussian",
        {"center": center, "width": width, "scale": scale, "eps": eps},
        cell_sups=TailModel("exponential", rate=1.0, scale=abs(scale), period=width, overlap=None),
    )


def exponential(center=0.0, width=1.0, scale=1.0, eps=EPS_TAIL):
    """Two-sided ``scale * exp(-|x - center| / width)``, cut below ``eps``."""
    return WindowSpec(
        "exponential",
        {"center": center, "width": width, "scale": scale, "eps": eps},
        cell_sups=TailModel("exponential", rate=1.0, scale=abs(scale), period=width, overlap=None),
    )


def paper_window(which, bumps=None):
    """The separating examples ``f1, f2, f3`` built from dyadic bumps.

    ``f_j = sum_n c_n chi_[n+1-2^-n, n+1-2^-(n+1))`` with heights
    ``c_n = 1/(n+1)``, ``1/sqrt(n+1)`` and ``1``.  Without an explicit
    ``bumps`` count, bumps narrower than the sampling step are dropped.
    """
    kind = which if str(which).startswith("paper_") else f"paper_f{which}"
    if kind not in PAPER_KINDS:
        raise ValueError(f"unknown bump window {which!r}")
    params = {"scale": 1.0}
    if bumps is not None:
        params["bumps"] = int(bumps)
    return WindowSpec(kind, params, cell_sups=TailModel("power", PAPER_KINDS[kind], 1.0, 1.0, overlap=1))


def from_samples(values, step, start=0, cell_sups=None):
    return WindowSpec("samples", samples=values, step=float(step), start=int(start), cell_sups=cell_sups)


def builtin(name, **params):
    """Construct a named window (``rect``, ``gaussian``, ``paper_f2`` ...)."""
    if name == "rect":
        return rect(**params)
    if name == "hat":
        return hat(**params)
    if name == "gaussian":
        return gaussian(**params)
    if name == "exponential":
        return exponential(**params)
    if name in PAPER_KINDS:
        return paper_window(name, **params)
    raise ValueError(f"unknown builtin window {name!r}")


# grid handling


def grid_ratio(length, step, what="length"):
    """``length / step`` as an exact integer, or raise :class:`AlignmentError`."""
    r = length / step
    n = round(r)
    if n == 0 or abs(r - n) > SNAP_RTOL * max(1.0, abs(r)):
        raise AlignmentError(f"{what} {length:g} is not a multiple of the grid step {step:g}")
    return int(n)


def resolve_step(P, step=None, *windows):
    if step is None:
        for w in windows:
            if w is not None and w.is_sampled:
                step = w.step
                break
        else:
            step = P / DEFAULT_M
    grid_ratio(P, step, "period")
    return float(step)


def sample(f, step=None):
    """Grid samples of ``f`` covering its (tail-truncated) support."""
    if f.is_sampled:
        if step is None or math.isclose(step, f.step, rel_tol=1e-12):
            return Sampled(f.start, f.samples, f.step)
        ratio = f.step / step
        r = round(ratio)
        if r < 1 or abs(ratio - r) > SNAP_RTOL * ratio:
            raise AlignmentError(f"cannot resample a window of step {f.step:g} onto step {step:g}")
        return Sampled(f.start * r, np.repeat(f.samples, r), float(step))
    if step is None:
        raise ValueError("a step is required to sample an analytic window")
    lo, hi = f.support(step)
    if not math.isfinite(hi) or not math.isfinite(lo):
        raise TruncationError("window has unbounded support")
    i0 = math.ceil(lo / step - 1e-9)
    i1 = math.ceil(hi / step - 1e-9)
    idx = np.arange(i0, max(i1, i0))
    return Sampled(i0, f.evaluate(idx * step, step), float(step))


def bracket_product(f, g, P, step=None):
    """Bracket product ``<f, g>_P(x) = sum_n f(x - nP) conj(g(x - nP))`` on ``[0, P)``."""
    step = resolve_step(P, step, f, g)
    M = grid_ratio(P, step, "period")
    a, b = sample(f, step), sample(g, step)
    return FiberField(P, kernels.fold_product(a.values, a.start, b.values, b.start, 0, M))


def fiberize(f, P, N=DEFAULT_N, step=None):
    """The unitary ``U_P f = (x -> f(x + nP))_{|n| <= N}``."""
    step = resolve_step(P, step, f)
    M = grid_ratio(P, step, "period")
    s = _trim(sample(f, step))
    if s.values.size and (s.start < -N * M or s.stop > (N + 1) * M):
        need = max(-(s.start // M), -(-s.stop // M) - 1)
        raise TruncationError(f"support needs truncation N >= {need}, got N = {N}", required=need)
    data = np.zeros((2 * N + 1) * M, dtype=complex)
    off = s.start + N * M
    data[off : off + s.values.size] = s.values
    return ModuleVector(P, data.reshape(2 * N + 1, M))


def defiberize(x):
    """Inverse of :func:`fiberize`: the window whose cell ``n`` is entry ``n``."""
    M = x.M
    return from_samples(x.data.reshape(-1), x.period / M, start=-x.N * M)


def trim(w):
    """Drop leading and trailing zero samples of a sampled window."""
    s = _trim(sample(w))
    return from_samples(s.values, s.step, start=s.start, cell_sups=w.cell_sups)


def _trim(s):
    nz = np.flatnonzero(s.values)
    if nz.size == 0:
        return Sampled(0, s.values[:0], s.step)
    return Sampled(s.start + int(nz[0]), s.values[nz[0] : nz[-1] + 1], s.step)


def translate(f, c):
    """``(T_c f)(x) = f(x - c)``; sampled windows need ``c`` on their grid."""
    if f.is_sampled:
        k = round(c / f.step)
        if abs(c / f.step - k) > SNAP_RTOL * max(1.0, abs(c / f.step)):
            raise AlignmentError(f"translation {c:g} is not a multiple of the grid step {f.step:g}")
        return replace(f, start=f.start + int(k))
    return replace(f, shift=f.shift + c)


def dilate(f, a, c):
    """The unitary ``D_{a/c}: L_a^inf(l^2) -> L_c^inf(l^2)``, ``x -> f((a/c) x)``."""
    r = a / c
    tail = f.cell_sups.rescaled(1.0 / r) if f.cell_sups is not None else None
    if f.is_sampled:
        grid_ratio(a, f.step, "period a")
        return replace(f, step=f.step / r, cell_sups=tail)
    return replace(f, shift=f.shift / r, dilation=f.dilation * r, cell_sups=tail)


def dilate_module(x, c):
    """Move a module vector over ``L^inf[0, a]`` to ``L^inf[0, c]`` (same samples)."""
    return ModuleVector(c, x.data)


def module_action(h, f, step=None):
    """Left action ``h^P f`` of a fiber field ``h`` extended ``P``-periodically."""
    step = resolve_step(h.period, step if step is not None else h.period / h.M, f)
    if grid_ratio(h.period, step, "period") != h.M:
        raise AlignmentError("multiplier resolution does not match the sampling step")
    s = sample(f, step)
    idx = (s.start + np.arange(s.values.size)) % h.M
    return from_samples(s.values * h.samples[idx], step, start=s.start)


# norms


def lp_l2_norm(f, P, step=None):
    """``||f||_{L_P^inf(l^2)} = sqrt(sup_x sum_n |f(x - nP)|^2)``."""
    br = bracket_product(f, f, P, step)
    return float(math.sqrt(max(float(np.max(br.samples.real)), 0.0)))


def w2_norm(f, P, step=None):
    """``||f||_{W_P(L^inf, l^2)}`` from the per-cell sups of the samples."""
    step = resolve_step(P, step, f)
    M = grid_ratio(P, step, "period")
    s = sample(f, step)
    if s.values.size == 0:
        return 0.0
    first = s.start // M
    last = -(-s.stop // M)
    buf = np.zeros((last - first) * M)
    buf[s.start - first * M : s.stop - first * M] = np.abs(s.values)
    sups = buf.reshape(-1, M).max(axis=1)
    return float(math.sqrt(np.sum(sups**2)))


def l2_norm(f, step=None):
    """Riemann-sum L^2(R) norm."""
    s = sample(f, step)
    return float(math.sqrt(np.sum(np.abs(s.values) ** 2) * s.step))


# rational lattices


def rational_ratio(x, max_den=MAX_DENOMINATOR, tol=1e-12):
    """``(p, q)`` in lowest terms with ``|x - p/q| <= tol * x`` or ``None``.

    Walks the continued-fraction convergents of ``x`` and gives up once the
    denominator exceeds ``max_den``.
    """
    if not x > 0 or not math.isfinite(x):
        raise ValueError("ratio must be positive and finite")
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    r = x
    for _ in range(64):
        a = math.floor(r)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return None
        if abs(x - h1 / k1) <= tol * x:
            g = math.gcd(h1, k1)
            return h1 // g, k1 // g
        frac = r - a
        if frac <= 0:
            return None
        r = 1.0 / frac
    return None


def norm_equivalence_factors(a, c):
    """``(sqrt(p), sqrt(q))`` for ``a/c = p/q``, or ``None`` if incommensurable.

    For rational ratios ``||f||_{L_c} <= sqrt(p) ||f||_{L_a}`` and
    ``||f||_{L_a} <= sqrt(q) ||f||_{L_c}``.
    """
    pq = rational_ratio(a / c)
    if pq is None:
        return None
    p, q = pq
    return math.sqrt(p), math.sqrt(q)


# classification


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SpaceMembership:
    in_W1: Verdict
    in_W2: Verdict
    in_X: Verdict
    in_Linf_l2: Verdict
    period: float
    norms: dict = field(default_factory=dict)
    basis: str = "support"

    @property
    def pattern(self):
        return (self.in_W1, self.in_W2, self.in_X, self.in_Linf_l2)

    def to_dict(self):
        return {
            "period": self.period,
            "in_W1": self.in_W1.value,
            "in_W2": self.in_W2.value,
            "in_X": self.in_X.value,
            "in_Linf_l2": self.in_Linf_l2.value,
            "norms": dict(self.norms),
            "basis": self.basis,
        }


def _v(flag):
    return Verdict.YES if flag else Verdict.NO


def classify_space(f, P, step=None):
    """Place ``f`` in the chain ``W(L^inf,l^1) < W(L^inf,l^2) < X_P < L_P^inf(l^2)``.

    Compactly supported windows belong to every space.  Otherwise the verdicts
    come from the analytic tail model ``f.cell_sups`` rather than from the
    (necessarily finite) samples; without a model they are undetermined.
    """
    Y, U = Verdict.YES, Verdict.UNDETERMINED
    step = resolve_step(P, step, f)
    if f.compact or (f.cell_sups is not None and f.cell_sups.law == "exponential" and f.kind != "samples"):
        norms = {"W2": w2_norm(f, P, step), "Linf_l2": lp_l2_norm(f, P, step)}
        return SpaceMembership(Y, Y, Y, Y, P, norms, basis="support")
    tm = f.cell_sups
    if tm is None:
        return SpaceMembership(U, U, U, U, P, {}, basis="none")

    # W-amalgams do not depend on the cell length; X and L^inf(l^2) only agree
    # across commensurable cell lengths.
    w1, w2 = _v(tm.summable), _v(tm.square_summable)
    commensurable = rational_ratio(P / tm.period) is not None
    if w2 is Y:
        x = Y
    elif not commensurable:
        x = U
    elif not tm.vanishing:
        x = Verdict.NO
    else:
        x = Y if tm.overlap is not None else U
    if x is Y:
        lin = Y
    elif not commensurable:
        lin = U
    elif not tm.bounded:
        lin = Verdict.NO
    else:
        lin = Y if tm.overlap is not None else U

    norms = {}
    if w2 is Y:
        norms["W2"] = math.sqrt(tm.square_sum())
    if lin is Y and tm.overlap == 1 and math.isclose(P, tm.period, rel_tol=1e-12):
        norms["Linf_l2"] = float(tm.scale if tm.law == "exponential" or tm.rate >= 0 else math.inf)
    return SpaceMembership(w1, w2, x, lin, P, norms, basis="tail model")
