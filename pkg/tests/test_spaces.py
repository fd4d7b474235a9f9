import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaborfiber import spaces
from gaborfiber.errors import AlignmentError, TruncationError
from gaborfiber.hmod import ModuleSequence, ModuleVector, basis_vector, inner_product, module_norm, weak_frame_bounds
from gaborfiber.spaces import (
    TailModel,
    Verdict,
    bracket_product,
    classify_space,
    defiberize,
    dilate,
    dilate_module,
    fiberize,
    from_samples,
    l2_norm,
    lp_l2_norm,
    norm_equivalence_factors,
    rational_ratio,
    rect,
    translate,
)
from gaborfiber.valg import FiberField, sup_norm, unit

Y, NO, U = Verdict.YES, Verdict.NO, Verdict.UNDETERMINED
STEP = 1.0 / 32
seeds = st.integers(0, 2**32 - 1)


def random_window(rng, step=STEP, max_len=200, lo=-100, hi=100):
    n = int(rng.integers(1, max_len))
    start = int(rng.integers(lo, hi))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return from_samples(v, step, start=start)


def bracket_oracle(f, g, P, step):
    # direct pointwise evaluation of the periodization at every fiber
    M = round(P / step)
    x = np.arange(M) * step
    lo = min(f.support(step)[0], g.support(step)[0])
    hi = max(f.support(step)[1], g.support(step)[1])
    ns = range(math.floor((lo - P) / P) - 1, math.ceil(hi / P) + 2)
    return sum(f.evaluate(x + n * P) * np.conj(g.evaluate(x + n * P)) for n in ns)


# bracket product


def test_bracket_examples():
    e = unit(1.0, 32)
    assert bracket_product(rect(0, 1), rect(0, 1), 1.0, STEP).allclose(e, atol=0)
    # both factors are shifted by the same nP, so disjoint supports never meet
    disjoint = bracket_product(rect(0, 1), rect(1, 2), 1.0, STEP)
    assert sup_norm(disjoint) == 0.0
    assert np.allclose(bracket_oracle(rect(0, 1), rect(1, 2), 1.0, STEP), 0.0)
    assert bracket_product(rect(0, 1), translate(rect(1, 2), -1.0), 1.0, STEP).allclose(e, atol=0)


@given(seeds)
def test_bracket_matches_pointwise_oracle(seed):
    rng = np.random.default_rng(seed)
    f, g = random_window(rng), random_window(rng)
    for P in (1.0, 0.5, 3.0):
        assert np.allclose(bracket_product(f, g, P).samples, bracket_oracle(f, g, P, STEP), atol=1e-10)


@given(seeds)
def test_bracket_positive_and_conjugate_symmetric(seed):
    rng = np.random.default_rng(seed)
    f, g = random_window(rng), random_window(rng)
    ff = bracket_product(f, f, 1.0)
    assert np.all(ff.samples.real >= 0) and np.max(np.abs(ff.samples.imag)) == 0
    assert bracket_product(g, f, 1.0).allclose(bracket_product(f, g, 1.0).conj(), atol=1e-12)


@given(seeds)
def test_bracket_module_linearity(seed):
    rng = np.random.default_rng(seed)
    f, g = random_window(rng), random_window(rng)
    h = FiberField(1.0, rng.standard_normal(32) + 1j * rng.standard_normal(32))
    lhs = bracket_product(spaces.module_action(h, f), g, 1.0)
    rhs = h * bracket_product(f, g, 1.0)
    assert lhs.allclose(rhs, atol=1e-10)


def test_misaligned_period():
    with pytest.raises(AlignmentError):
        bracket_product(rect(0, 1), rect(0, 1), 1.0, step=0.3)
    w = from_samples(np.ones(4), 0.25)
    with pytest.raises(AlignmentError):
        spaces.sample(w, 0.1)


# fiberization


def test_fiberize_examples():
    assert np.array_equal(fiberize(rect(0, 1), 1.0, N=3, step=STEP).data, basis_vector(0, 3, 1.0, 32).data)
    assert np.array_equal(fiberize(rect(1, 2), 1.0, N=3, step=STEP).data, basis_vector(1, 3, 1.0, 32).data)


def test_defiberize_examples():
    w = defiberize(basis_vector(0, 2, 1.0, 32))
    assert np.array_equal(w.evaluate(np.arange(-64, 96) * STEP), rect(0, 1).evaluate(np.arange(-64, 96) * STEP))
    z = defiberize(ModuleVector.zeros(2, 1.0, 32))
    assert not z.samples.any()


def test_fiberize_truncation_error():
    with pytest.raises(TruncationError) as info:
        fiberize(rect(0, 5), 1.0, N=2, step=STEP)
    assert info.value.required == 4
    fiberize(rect(0, 5), 1.0, N=4, step=STEP)


@given(seeds)
def test_fiberize_round_trip_and_isometry(seed):
    rng = np.random.default_rng(seed)
    f = random_window(rng)
    x = fiberize(f, 1.0, N=12)
    back = fiberize(defiberize(x), 1.0, N=12)
    assert np.array_equal(back.data, x.data)
    assert module_norm(x) ** 2 == pytest.approx(float(bracket_oracle(f, f, 1.0, STEP).real.max()), rel=1e-12)
    assert module_norm(x) == pytest.approx(lp_l2_norm(f, 1.0), rel=1e-12)


@given(seeds)
def test_fiberize_preserves_inner_product(seed):
    rng = np.random.default_rng(seed)
    f, g = random_window(rng), random_window(rng)
    ip = inner_product(fiberize(f, 1.0, N=12), fiberize(g, 1.0, N=12))
    assert ip.allclose(bracket_product(f, g, 1.0), atol=1e-10)


# translation and dilation


def test_translate_examples(rng):
    f = random_window(rng)
    assert np.array_equal(spaces.sample(translate(f, 0.0)).values, f.samples)
    r = translate(rect(0, 1), 1.0)
    x = np.arange(-64, 128) * STEP
    assert np.array_equal(r.evaluate(x), rect(1, 2).evaluate(x))
    assert lp_l2_norm(r, 1.0, STEP) == lp_l2_norm(rect(0, 1), 1.0, STEP) == 1.0
    shifted = fiberize(translate(f, 1.0), 1.0, N=12)
    assert np.array_equal(shifted.data[1:], fiberize(f, 1.0, N=12).data[:-1])
    with pytest.raises(AlignmentError):
        translate(f, STEP / 3)


@given(seeds, st.integers(-200, 200))
def test_translation_is_an_isometry(seed, shift):
    rng = np.random.default_rng(seed)
    f = random_window(rng)
    c = shift * STEP
    assert lp_l2_norm(translate(f, c), 1.0) == pytest.approx(lp_l2_norm(f, 1.0), rel=1e-12)


def test_translation_keeps_x_verdict():
    for which in (1, 2, 3):
        f = spaces.paper_window(which)
        assert classify_space(translate(f, 0.5), 1.0).in_X == classify_space(f, 1.0).in_X


def test_dilate_examples():
    f = rect(0, 1)
    d = dilate(f, 1.0, 1.0)
    x = np.arange(-32, 64) * STEP
    assert np.array_equal(d.evaluate(x), f.evaluate(x))
    d = dilate(f, 1.0, 2.0)
    assert np.array_equal(d.evaluate(x), rect(0, 2).evaluate(x))
    assert lp_l2_norm(d, 2.0, STEP) == pytest.approx(1.0)


@given(seeds)
def test_dilation_is_unitary_between_modules(seed):
    rng = np.random.default_rng(seed)
    f = random_window(rng, step=1.0 / 64)
    d = dilate(f, 3.0, 2.0)
    assert lp_l2_norm(d, 2.0) == pytest.approx(lp_l2_norm(f, 3.0), rel=1e-10)


def test_dilated_sequence_keeps_frame_bounds(rng):
    ws = [random_window(rng, step=1.0 / 64, lo=-150, hi=150) for _ in range(8)]
    seq = ModuleSequence([fiberize(w, 3.0, N=4) for w in ws])
    moved = ModuleSequence([fiberize(dilate(w, 3.0, 2.0), 2.0, N=4) for w in ws])
    assert np.allclose(tuple(weak_frame_bounds(moved)), tuple(weak_frame_bounds(seq)), rtol=1e-10)
    assert tuple(weak_frame_bounds(ModuleSequence([dilate_module(x, 2.0) for x in seq]))) == tuple(
        weak_frame_bounds(seq)
    )


def test_dilate_sampled_window_requires_aligned_period():
    with pytest.raises(AlignmentError):
        dilate(from_samples(np.ones(3), 0.3), 1.0, 2.0)


# norms and rational periods


def test_norm_equivalence_examples():
    assert norm_equivalence_factors(2.0, 2.0) == (1.0, 1.0)
    assert norm_equivalence_factors(3.0, 2.0) == pytest.approx((math.sqrt(3), math.sqrt(2)))
    assert norm_equivalence_factors(math.sqrt(2), 1.0) is None


def test_rational_ratio():
    assert rational_ratio(0.75) == (3, 4)
    assert rational_ratio(1 / 3) == (1, 3)
    assert rational_ratio(math.pi) is None
    assert rational_ratio(123 / 9999) == (41, 3333)


@given(seeds)
def test_l2_embedding(seed):
    rng = np.random.default_rng(seed)
    f = random_window(rng)
    for P in (0.5, 1.0, 2.0):
        assert l2_norm(f) <= math.sqrt(P) * lp_l2_norm(f, P) * (1 + 1e-12)


# classification


@pytest.mark.parametrize(
    "which, pattern",
    [(1, (NO, Y, Y, Y)), (2, (NO, NO, Y, Y)), (3, (NO, NO, NO, Y))],
)
def test_separating_examples(which, pattern):
    assert classify_space(spaces.paper_window(which), 1.0).pattern == pattern


def test_separating_example_norms():
    m1 = classify_space(spaces.paper_window(1), 1.0)
    assert m1.norms["W2"] == pytest.approx(math.pi / math.sqrt(6), rel=1e-9)
    assert m1.norms["Linf_l2"] == 1.0
    assert "W2" not in classify_space(spaces.paper_window(3), 1.0).norms


def test_paper_window_samples():
    f = spaces.paper_window(2)
    x = np.array([0.0, 0.25, 0.5, 1.0 - 1e-9, 1.5, 1.6, 1.75, 2.75, 2.8])
    expected = [1.0, 1.0, 0.0, 0.0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0.0, 1 / math.sqrt(3), 1 / math.sqrt(3)]
    assert np.allclose(f.evaluate(x, step=1e-3).real, expected)
    # bumps narrower than the step are dropped
    s = spaces.sample(f, 2.0**-6)
    assert s.stop * 2.0**-6 <= 7.0


def test_finite_support_is_in_every_space(rng):
    f = random_window(rng)
    m = classify_space(f, 1.0)
    assert m.pattern == (Y, Y, Y, Y)
    assert m.norms["Linf_l2"] == pytest.approx(lp_l2_norm(f, 1.0))
    assert m.norms["W2"] >= m.norms["Linf_l2"]


def test_gaussian_and_missing_tail_model():
    assert classify_space(spaces.gaussian(), 1.0, step=1 / 64).pattern == (Y, Y, Y, Y)
    f = spaces.WindowSpec("paper_f3", {"scale": 1.0})
    assert classify_space(f, 1.0).pattern == (U, U, U, U)


def test_incommensurable_period():
    m = classify_space(spaces.paper_window(2), math.sqrt(2), step=math.sqrt(2) / 64)
    assert (m.in_W1, m.in_W2, m.in_X) == (NO, NO, U)
    m = classify_space(spaces.paper_window(2), 1.5, step=1.5 / 64)
    assert m.in_X == Y


@given(
    st.sampled_from(["power", "exponential"]),
    st.floats(0.01, 3.0),
    st.one_of(st.none(), st.integers(1, 4)),
    st.sampled_from([1.0, 2.0, 0.5, math.sqrt(2)]),
)
def test_chain_is_monotone(law, rate, overlap, P):
    tm = TailModel(law, rate, 1.0, 1.0, overlap)
    f = spaces.WindowSpec("paper_f3", {"scale": 1.0}, cell_sups=tm)
    m = classify_space(f, P, step=P / 16)
    chain = [v == Y for v in m.pattern]
    assert all(not chain[i] or chain[i + 1] for i in range(3))


def test_tail_model_validation():
    with pytest.raises(ValueError):
        TailModel("power", 1.0, scale=-1.0)
    with pytest.raises(ValueError):
        TailModel("cubic", 1.0)
