"""Sampled model of the commutative von Neumann algebra L^inf[0, P].

An element is stored as ``M`` complex samples on the uniform grid
``x_m = m * P / M``.  Everything is pointwise, so "almost everywhere"
statements become statements about every grid fiber.
"""
from __future__ import annotations

import math
import numbers

import numpy as np

from .errors import CompatibilityError, RealExpectedError

__all__ = [
    "FiberField",
    "alg_mul",
    "sup_norm",
    "ess_bounds",
    "unit",
    "zero",
    "constant",
    "imag_tolerance",
]

_PERIOD_RTOL = 1e-12


class FiberField:
    """A field of complex scalars over ``M`` uniformly spaced fibers of ``[0, period)``.

    Instances are immutable: the sample array is copied on construction and
    marked read-only.
    """

    __slots__ = ("period", "samples")

    def __init__(self, period, samples):
        period = float(period)
        if not period > 0 or not math.isfinite(period):
            raise ValueError(f"period must be positive and finite, got {period!r}")
        arr = np.array(samples, dtype=complex).reshape(-1)
        if arr.size < 1:
            raise ValueError("a FiberField needs at least one sample")
        arr.setflags(write=False)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "samples", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FiberField is immutable")

    @property
    def M(self):
        return self.samples.size

    @property
    def step(self):
        return self.period / self.M

    @property
    def grid(self):
        """Fiber coordinates ``x_m``."""
        return np.arange(self.M) * self.step

    def compatible(self, other):
        return (
            self.M == other.M
            and abs(self.period - other.period) <= _PERIOD_RTOL * max(self.period, other.period)
        )

    def _check(self, other):
        if not isinstance(other, FiberField):
            raise TypeError(f"expected FiberField, got {type(other).__name__}")
        if not self.compatible(other):
            raise CompatibilityError(
                f"incompatible fields: (period={self.period}, M={self.M}) vs "
                f"(period={other.period}, M={other.M})"
            )

    def _new(self, samples):
        return FiberField(self.period, samples)

    # pointwise helpers
    def conj(self):
        return self._new(np.conj(self.samples))

    def abs(self):
        return self._new(np.abs(self.samples))

    @property
    def real(self):
        return self.samples.real

    def __add__(self, other):
        if isinstance(other, FiberField):
            self._check(other)
            return self._new(self.samples + other.samples)
        return self._new(self.samples + complex(other))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.samples)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FiberField):
            return alg_mul(self, other)
        if isinstance(other, numbers.Number):
            return self._new(self.samples * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._new(self.samples / complex(scalar))

    def allclose(self, other, atol=1e-12, rtol=0.0):
        self._check(other)
        return bool(np.allclose(self.samples, other.samples, atol=atol, rtol=rtol))

    def __repr__(self):
        return f"FiberField(period={self.period:g}, M={self.M})"


def alg_mul(f, g):
    """Algebra product: the pointwise product of two compatible fields."""
    f._check(g)
    return FiberField(f.period, f.samples * g.samples)


def sup_norm(f):
    """Discrete essential supremum ``max_m |f[m]|``."""
    return float(np.max(np.abs(f.samples)))


def imag_tolerance(f):
    """Realness tolerance ``1e-10 * (1 + sup_norm(f))``."""
    return 1e-10 * (1.0 + sup_norm(f))


def ess_bounds(f):
    """Return ``(min_m Re f[m], max_m Re f[m])`` of a real-valued field.

    Raises
    ------
    RealExpectedError
        If some sample has an imaginary part above :func:`imag_tolerance`.
    """
    tol = imag_tolerance(f)
    worst = float(np.max(np.abs(f.samples.imag)))
    if worst > tol:
        m = int(np.argmax(np.abs(f.samples.imag)))
        raise RealExpectedError(
            f"field is not real: |Im f[{m}]| = {worst:.3e} exceeds tolerance {tol:.3e}"
        )
    re = f.samples.real
    return float(re.min()), float(re.max())


def constant(value, period, M):
    return FiberField(period, np.full(M, complex(value)))


def unit(period, M):
    """The unit ``e`` of the algebra: the constant-one field."""
    return constant(1.0, period, M)


def zero(period, M):
    return constant(0.0, period, M)
