import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gaborfiber.errors import CompatibilityError, RealExpectedError
from gaborfiber.valg import FiberField, alg_mul, constant, ess_bounds, imag_tolerance, sup_norm, unit, zero

complex_samples = arrays(
    np.complex128,
    st.integers(1, 64),
    elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
)


def test_unit_is_multiplicative_identity():
    f = FiberField(2.0, np.arange(8) + 1j)
    assert alg_mul(unit(2.0, 8), f).allclose(f, atol=0)


def test_zero_annihilates():
    f = FiberField(1.0, np.arange(5))
    assert sup_norm(alg_mul(zero(1.0, 5), f)) == 0.0


def test_constant_sup_norm():
    assert sup_norm(constant(-3 + 4j, 1.0, 7)) == pytest.approx(5.0)


def test_incompatible_grids_raise():
    with pytest.raises(CompatibilityError):
        alg_mul(unit(1.0, 8), unit(1.0, 16))
    with pytest.raises(CompatibilityError):
        unit(1.0, 8) + unit(2.0, 8)


def test_immutable():
    f = unit(1.0, 4)
    with pytest.raises(AttributeError):
        f.period = 2.0
    with pytest.raises(ValueError):
        f.samples[0] = 3.0


def test_ess_bounds_real_field():
    f = FiberField(1.0, [0.5, -1.0, 2.0])
    assert ess_bounds(f) == (-1.0, 2.0)


def test_ess_bounds_rejects_complex_field():
    with pytest.raises(RealExpectedError):
        ess_bounds(FiberField(1.0, [1.0, 1.0 + 1e-3j]))


def test_ess_bounds_tolerates_rounding_noise():
    f = FiberField(1.0, [1.0, 1.0 + 1e-13j])
    assert ess_bounds(f) == (1.0, 1.0)
    assert imag_tolerance(f) == pytest.approx(2e-10)


def test_invalid_period():
    with pytest.raises(ValueError):
        FiberField(0.0, [1.0])


@given(complex_samples, st.data())
def test_product_is_commutative_and_conjugation_is_an_involution(x, data):
    y = data.draw(arrays(np.complex128, x.shape, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False)))
    f, g = FiberField(1.0, x), FiberField(1.0, y)
    # equal up to rounding: fused multiply-add may order the partial products differently
    scale = 1e-15 * (1 + sup_norm(f) * sup_norm(g))
    assert (f * g).allclose(g * f, atol=scale)
    assert f.conj().conj().allclose(f, atol=0)


@given(complex_samples)
def test_norm_is_submultiplicative_and_c_star(x):
    f = FiberField(1.0, x)
    n = sup_norm(f)
    assert sup_norm(f * f) <= n * n * (1 + 1e-12) + 1e-300
    assert sup_norm(f.conj() * f) == pytest.approx(n * n, rel=1e-12, abs=1e-300)


@given(complex_samples)
def test_modulus_squared_is_real_and_nonnegative(x):
    f = FiberField(1.0, x)
    lo, hi = ess_bounds(f.conj() * f)
    assert lo >= 0.0 and hi >= lo
