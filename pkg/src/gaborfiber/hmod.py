"""Finite truncation of the module l^2_strong(A) over A = L^inf[0, P].

A :class:`ModuleVector` is a family ``(x_n)`` of fiber fields indexed by
``n = -N..N``; it is stored as a ``(2N+1, M)`` array whose column ``m`` is
the coordinate vector of the element at fiber ``x_m``.  Since the algebra
acts diagonally, every module operation reduces to ordinary linear algebra
on these fiber columns.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _parallel
from .errors import CompatibilityError, NotAFrameError, NumericalError
from .valg import FiberField, sup_norm

__all__ = [
    "ModuleVector",
    "ModuleSequence",
    "FiberMatrixField",
    "FrameBounds",
    "basis_vector",
    "canonical_basis",
    "inner_product",
    "module_norm",
    "tail_norms",
    "gram_matrix",
    "frame_operator_field",
    "fiber_eigvalsh",
    "weak_frame_bounds",
    "synthesize",
    "analyze",
    "reconstruct",
    "canonical_dual",
    "frame_tol",
    "RECON_TOL",
    "DEFAULT_N",
]

DEFAULT_N = 16
RECON_TOL = 1e-8
_PERIOD_RTOL = 1e-12


def frame_tol(upper):
    """Invertibility threshold ``1e-9 * (1 + B)``."""
    return 1e-9 * (1.0 + upper)


class ModuleVector:
    """Element of l^2_strong(L^inf[0, period]) truncated to indices ``|n| <= N``."""

    __slots__ = ("period", "data")

    def __init__(self, period, data):
        data = np.array(data, dtype=complex)
        if data.ndim != 2 or data.shape[0] % 2 != 1:
            raise ValueError("data must have shape (2N+1, M)")
        data.setflags(write=False)
        object.__setattr__(self, "period", float(period))
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    @classmethod
    def from_entries(cls, entries, N, period=None, M=None):
        """Build from a mapping ``n -> FiberField``; missing indices are zero."""
        fields = list(entries.values())
        if fields:
            period = fields[0].period if period is None else period
            M = fields[0].M if M is None else M
        if period is None or M is None:
            raise ValueError("period and M are required for an empty vector")
        data = np.zeros((2 * N + 1, M), dtype=complex)
        for n, f in entries.items():
            if abs(n) > N:
                raise IndexError(f"index {n} outside truncation [-{N}, {N}]")
            if f.M != M or abs(f.period - period) > _PERIOD_RTOL * period:
                raise CompatibilityError(f"entry {n} is not on the (period={period}, M={M}) grid")
            data[n + N] = f.samples
        return cls(period, data)

    @classmethod
    def zeros(cls, N, period, M):
        return cls(period, np.zeros((2 * N + 1, M), dtype=complex))

    @property
    def N(self):
        return (self.data.shape[0] - 1) // 2

    @property
    def M(self):
        return self.data.shape[1]

    @property
    def indices(self):
        return np.arange(-self.N, self.N + 1)

    @property
    def columns(self):
        """Fiber columns, shape ``(M, 2N+1)``."""
        return self.data.T

    def entry(self, n):
        if abs(n) > self.N:
            return FiberField(self.period, np.zeros(self.M))
        return FiberField(self.period, self.data[n + self.N])

    def compatible(self, other):
        return (
            self.data.shape == other.data.shape
            and abs(self.period - other.period) <= _PERIOD_RTOL * max(self.period, other.period)
        )

    def _check(self, other):
        if not self.compatible(other):
            raise CompatibilityError(
                f"incompatible module vectors: (N={self.N}, M={self.M}, period={self.period}) vs "
                f"(N={other.N}, M={other.M}, period={other.period})"
            )

    def __add__(self, other):
        self._check(other)
        return ModuleVector(self.period, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return ModuleVector(self.period, self.data - other.data)

    def __mul__(self, scalar):
        if isinstance(scalar, FiberField):
            return self.act(scalar)
        return ModuleVector(self.period, self.data * complex(scalar))

    __rmul__ = __mul__

    def act(self, field):
        """Left action of the algebra: multiply every entry by ``field``."""
        if field.M != self.M or abs(field.period - self.period) > _PERIOD_RTOL * self.period:
            raise CompatibilityError("multiplier is not on the module's fiber grid")
        return ModuleVector(self.period, self.data * field.samples[None, :])

    def __repr__(self):
        return f"ModuleVector(N={self.N}, M={self.M}, period={self.period:g})"


class ModuleSequence:
    """An ordered, grid-compatible family ``(x_1, ..., x_L)`` of module vectors."""

    __slots__ = ("elements",)

    def __init__(self, elements):
        elements = tuple(elements)
        if not elements:
            raise ValueError("a ModuleSequence needs at least one element")
        first = elements[0]
        for x in elements[1:]:
            first._check(x)
        object.__setattr__(self, "elements", elements)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleSequence is immutable")

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    @property
    def N(self):
        return self.elements[0].N

    @property
    def M(self):
        return self.elements[0].M

    @property
    def period(self):
        return self.elements[0].period

    @property
    def columns(self):
        """Coefficient columns, shape ``(M, 2N+1, L)``."""
        return np.stack([x.data.T for x in self.elements], axis=2)

    def permuted(self, order):
        return ModuleSequence([self.elements[i] for i in order])

    def __repr__(self):
        return f"ModuleSequence(L={len(self)}, N={self.N}, M={self.M}, period={self.period:g})"


class FiberMatrixField:
    """A ``D x D`` complex matrix at every fiber, stored with shape ``(M, D, D)``."""

    __slots__ = ("period", "data", "hermitian")

    def __init__(self, period, data, hermitian=False):
        data = np.array(data, dtype=complex)
        if data.ndim != 3 or data.shape[1] != data.shape[2]:
            raise ValueError("data must have shape (M, D, D)")
        if not np.all(np.isfinite(data)):
            raise NumericalError("fiber matrix field has non-finite entries")
        if hermitian:
            dev = hermitian_defect(data)
            if dev > 1e-10 * (1.0 + float(np.max(np.abs(data), initial=0.0))):
                m = int(np.argmax(np.max(np.abs(data - np.conj(np.swapaxes(data, 1, 2))), axis=(1, 2))))
                raise ValueError(f"matrix at fiber {m} is not Hermitian (defect {dev:.3e})")
        data.setflags(write=False)
        object.__setattr__(self, "period", float(period))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "hermitian", bool(hermitian))

    def __setattr__(self, name, value):
        raise AttributeError("FiberMatrixField is immutable")

    @property
    def dim(self):
        return self.data.shape[1]

    @property
    def M(self):
        return self.data.shape[0]

    def entry(self, j, k):
        """Entry ``(j, k)`` as a fiber field (zero-based matrix indices)."""
        return FiberField(self.period, self.data[:, j, k])

    def __repr__(self):
        return f"FiberMatrixField(dim={self.dim}, M={self.M}, period={self.period:g})"


def hermitian_defect(data):
    return float(np.max(np.abs(data - np.conj(np.swapaxes(data, 1, 2))), initial=0.0))


class FrameBounds(NamedTuple):
    lower: float
    upper: float

    @property
    def is_frame(self):
        return self.lower > frame_tol(self.upper)

    @property
    def kind(self):
        return "weak frame" if self.is_frame else "Bessel only"


def basis_vector(n, N, period, M):
    """The canonical weak basis element ``e^{(n)}``."""
    data = np.zeros((2 * N + 1, M), dtype=complex)
    data[n + N] = 1.0
    return ModuleVector(period, data)


def canonical_basis(N, period, M):
    return ModuleSequence([basis_vector(n, N, period, M) for n in range(-N, N + 1)])


def inner_product(x, y):
    """Module inner product ``<x, y>[m] = sum_n x_n[m] * conj(y_n[m])``."""
    x._check(y)
    return FiberField(x.period, np.sum(x.data * np.conj(y.data), axis=0))


def module_norm(x):
    return float(np.sqrt(sup_norm(inner_product(x, x))))


def tail_norms(x):
    """Tail diagnostic ``t_R = sup_m sum_{|n| > R} |x_n[m]|^2`` for ``R = 0..N``.

    At a finite truncation every weak-strong sum is finite; the tail profile
    records how much of the squared norm sits beyond each radius.
    """
    sq = np.abs(x.data) ** 2
    N = x.N
    tails = []
    for R in range(N + 1):
        outside = np.concatenate([sq[: N - R], sq[N + R + 1 :]], axis=0)
        tails.append(float(outside.sum(axis=0).max()) if outside.size else 0.0)
    return np.array(tails)


def gram_matrix(seq):
    """Gramian ``Gamma[n, k] = <x_k, x_n>`` at every fiber (Hermitian)."""
    C = seq.columns
    G = np.einsum("mrn,mrk->mnk", np.conj(C), C)
    G = 0.5 * (G + np.conj(np.swapaxes(G, 1, 2)))
    return FiberMatrixField(seq.period, G, hermitian=True)


def _canonical_order(seq):
    # Summation in a content-defined order makes T(m) bitwise invariant under
    # permutations of the sequence.
    keys = [x.data.tobytes() for x in seq.elements]
    return sorted(range(len(keys)), key=keys.__getitem__)


def frame_operator_field(seq):
    """Per-fiber frame operator ``T(m) = sum_l col_l(m) col_l(m)^H``."""
    order = _canonical_order(seq)
    D = 2 * seq.N + 1
    T = np.zeros((seq.M, D, D), dtype=complex)
    for l in order:
        col = seq.elements[l].data.T
        T += col[:, :, None] * np.conj(col[:, None, :])
    return FiberMatrixField(seq.period, T, hermitian=True)


def _eigvalsh_chunk(data):
    return np.linalg.eigvalsh(data)


def fiber_eigvalsh(field):
    """Eigenvalues of every (Hermitian) fiber matrix, shape ``(M, D)`` ascending."""
    try:
        return _parallel.map_fibers(_eigvalsh_chunk, field.data)
    except np.linalg.LinAlgError:
        for m in range(field.M):
            try:
                np.linalg.eigvalsh(field.data[m])
            except np.linalg.LinAlgError as exc:
                raise NumericalError(f"eigensolver did not converge at fiber {m}", fiber=m) from exc
        raise


def weak_frame_bounds(seq):
    """Optimal weak frame bounds ``(A, B)`` over all fibers.

    ``A`` is the smallest and ``B`` the largest eigenvalue of the fiber frame
    operators; ``A`` is clipped at zero.
    """
    ev = fiber_eigvalsh(frame_operator_field(seq))
    return FrameBounds(max(float(ev[:, 0].min()), 0.0), float(ev[:, -1].max()))


def synthesize(coeffs, seq):
    """Synthesis ``sum_l c_l x_l`` with fiber-field coefficients."""
    coeffs = list(coeffs)
    if len(coeffs) != len(seq):
        raise ValueError(f"expected {len(seq)} coefficients, got {len(coeffs)}")
    out = np.zeros_like(seq[0].data)
    for c, x in zip(coeffs, seq):
        if c.M != seq.M or abs(c.period - seq.period) > _PERIOD_RTOL * seq.period:
            raise CompatibilityError("coefficient field is not on the sequence's fiber grid")
        out = out + c.samples[None, :] * x.data
    return ModuleVector(seq.period, out)


def analyze(x, seq):
    """Analysis ``c_l = <x, x_l>``."""
    return [inner_product(x, y) for y in seq]


def reconstruct(x, seq, dual):
    """``sum_l <x, x_l> d_l`` for a dual sequence ``d``."""
    return synthesize(analyze(x, seq), dual)


def canonical_dual(seq):
    """Canonical dual ``((U*U)^{-1} x_l)_l`` computed by per-fiber solves.

    Raises
    ------
    NotAFrameError
        If the lower weak frame bound does not exceed :func:`frame_tol`.
    """
    T = frame_operator_field(seq)
    ev = fiber_eigvalsh(T)
    A, B = float(ev[:, 0].min()), float(ev[:, -1].max())
    if not A > frame_tol(B):
        raise NotAFrameError(f"lower bound {A:.3e} does not exceed frame_tol {frame_tol(B):.3e}")
    C = seq.columns

    def solve(Tc, Cc):
        return np.linalg.solve(Tc, Cc)

    Y = _parallel.map_fibers(solve, T.data, C)
    return ModuleSequence(ModuleVector(seq.period, Y[:, :, l].T) for l in range(len(seq)))
