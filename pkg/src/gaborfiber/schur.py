"""Schur test for matrices with entries in L^inf[0, P], and Bessel bounds from Gramians."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hmod import FiberMatrixField, fiber_eigvalsh, hermitian_defect

__all__ = ["VARIANTS", "SchurReport", "schur_conditions", "bessel_from_gram"]

VARIANTS = ("absolute", "norm_convergent", "strong_convergent")


@dataclass(frozen=True)
class SchurReport:
    """Column and row budgets of the Schur test.

    ``variant`` is the strongest summation mode the matrix is known to meet;
    weaker modes are implied, so the flags below are monotone.
    """

    B_c: float
    B_r: float
    bound: float
    variant: str
    satisfied: bool

    @property
    def absolute(self):
        return self.variant == "absolute"

    @property
    def norm_convergent(self):
        return self.variant in ("absolute", "norm_convergent")

    @property
    def strong_convergent(self):
        return True

    def to_dict(self):
        return {
            "B_c": self.B_c,
            "B_r": self.B_r,
            "bound": self.bound,
            "variant": self.variant,
            "satisfied": self.satisfied,
        }


def _variant_from_tail(tail):
    if tail is None:
        return "strong_convergent"
    if isinstance(tail, str):
        if tail in VARIANTS:
            return tail
        aliases = {"finite": "absolute", "summable": "absolute", "norm": "norm_convergent", "strong": "strong_convergent"}
        if tail not in aliases:
            raise ValueError(f"unknown tail hint {tail!r}")
        return aliases[tail]
    # an analytic envelope of the entries (anything with summable/vanishing flags)
    if getattr(tail, "summable", False):
        return "absolute"
    if getattr(tail, "vanishing", False):
        return "norm_convergent"
    return "strong_convergent"


def schur_conditions(mfield, tail=None):
    """Schur budgets ``B_c``, ``B_r`` and the bound ``sqrt(B_c * B_r)``.

    Parameters
    ----------
    mfield : FiberMatrixField
        Matrix entries ``m_jk`` sampled at every fiber.
    tail : str or TailModel, optional
        What is known about the entries beyond the truncation.  ``"finite"``
        or a summable envelope selects the absolute variant, where every
        entry contributes its sup norm; otherwise the column and row sums of
        the moduli are formed fiberwise before taking the sup.

    Returns
    -------
    SchurReport
    """
    p = np.abs(mfield.data)
    variant = _variant_from_tail(tail)
    if variant == "absolute":
        sups = p.max(axis=0)
        B_c = float(sups.sum(axis=0).max())
        B_r = float(sups.sum(axis=1).max())
    else:
        B_c = float(p.sum(axis=1).max())
        B_r = float(p.sum(axis=2).max())
    bound = math.sqrt(B_c * B_r)
    return SchurReport(B_c, B_r, bound, variant, bool(math.isfinite(bound)))


def bessel_from_gram(G):
    """Weak Bessel bound ``max_m lambda_max(G(m))`` of a Gramian field.

    Raises
    ------
    ValueError
        If some fiber matrix is not Hermitian.
    """
    if not isinstance(G, FiberMatrixField):
        raise TypeError("expected a FiberMatrixField")
    data = G.data
    scale = 1.0 + float(np.max(np.abs(data), initial=0.0))
    if hermitian_defect(data) > 1e-10 * scale:
        raise ValueError("Gramian is not Hermitian")
    ev = fiber_eigvalsh(G if G.hermitian else FiberMatrixField(G.period, data, hermitian=True))
    return max(float(ev[:, -1].max()), 0.0)
