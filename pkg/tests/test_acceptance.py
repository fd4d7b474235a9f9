"""Acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL ...`` line; the lines are
printed in the ``acceptance criteria`` section of the pytest summary.
Run standalone with ``python tests/test_acceptance.py``.
"""
import math
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from gaborfiber import gabor, hmod, spaces
from gaborfiber.gabor import Lattice
from gaborfiber.hmod import ModuleSequence, ModuleVector
from gaborfiber.spaces import Verdict, from_samples


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def rect_orthonormal():
    return spaces.rect(0, 1), Lattice(1.0, 1.0, M=128)


def rect_tight():
    return spaces.rect(0, 1), Lattice(0.5, 1.0, M=128)


def gaussian_system():
    return spaces.gaussian(0.0, 1.0, eps=1e-12), Lattice(1.0, 0.5, M=256)


SYSTEMS = {"orthonormal rect": rect_orthonormal, "tight rect": rect_tight, "gaussian": gaussian_system}


def random_window(rng, step, span):
    n = int(rng.integers(1, max(2, round(span / step))))
    start = int(rng.integers(-round(span / step), round(span / step) + 1))
    return from_samples(rng.standard_normal(n) + 1j * rng.standard_normal(n), step, start=start)


def test_criterion_01_orthonormal_case():
    g, lat = rect_orthonormal()
    t0 = time.perf_counter()
    r = gabor.analyze_system(g, lat, K=8)
    dt = time.perf_counter() - t0
    res = max(r.parseval_residuals.values())
    ok = (
        abs(r.frame_lower - 1) <= 1e-10
        and abs(r.frame_upper - 1) <= 1e-10
        and r.parseval
        and res <= 1e-12
        and dt < 1.0
    )
    record(1, ok, f"A={r.frame_lower:.12g} B={r.frame_upper:.12g} parseval={r.parseval} residual={res:.1e} t={dt:.3f}s")


def test_criterion_02_tight_frame_case():
    g, lat = rect_tight()
    r = gabor.analyze_system(g, lat)
    # overlap enumeration: count translates g(x - na) covering each point, and
    # check that g and g(. - k/b) never meet for k != 0
    x = np.arange(lat.na) * lat.step
    cover = sum(g.evaluate(x - n * lat.a).real for n in range(-4, 5))
    meets = max(
        np.abs(g.evaluate(x + n * lat.a) * g.evaluate(x + n * lat.a - k / lat.b)).max()
        for n in range(-4, 5)
        for k in (-2, -1, 1, 2)
    )
    oracle = (float(cover.min() / lat.b), float(cover.max() / lat.b)) if meets == 0 else (math.nan, math.nan)
    h = gabor.dual_window(g, lat)
    err = float(np.max(np.abs((h - g / 2).samples)))
    ok = (
        abs(r.frame_lower - 2) <= 1e-10
        and abs(r.frame_upper - 2) <= 1e-10
        and oracle == (2.0, 2.0)
        and err <= 1e-12
    )
    record(2, ok, f"A={r.frame_lower:.12g} B={r.frame_upper:.12g} oracle={oracle} dual err={err:.1e}")


def test_criterion_03_gaussian_frame_bounds_vs_direct_oracle():
    g, lat = gaussian_system()
    t0 = time.perf_counter()
    A, B = gabor.gabor_frame_bounds(g, lat, K=8)
    Ad, Bd = gabor.direct_frame_bounds(g, lat, K=8)
    dt = time.perf_counter() - t0
    rl, ru = abs(A - Ad) / Ad, abs(B - Bd) / Bd
    ok = A > 0 and rl <= 0.02 and ru <= 0.02 and dt < 30.0
    record(3, ok, f"fiber=({A:.6f}, {B:.6f}) direct=({Ad:.6f}, {Bd:.6f}) rel=({rl:.1e}, {ru:.1e}) t={dt:.2f}s")


def test_criterion_04_walnut_equals_lattice_sum():
    g, lat = gaussian_system()
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(20):
        f = random_window(rng, lat.step, 4.0)
        w, _ = gabor.walnut_apply(g, g, lat, f, K=8)
        d = gabor.direct_frame_apply(g, g, lat, f)
        worst = max(worst, float(np.max(np.abs((w - d).samples)) / np.max(np.abs(d.samples))))
    record(4, worst <= 1e-6, f"max relative sup discrepancy over 20 windows = {worst:.2e}")


def test_criterion_05_wexler_raz():
    worst = {}
    ok = True
    for name, make in SYSTEMS.items():
        g, lat = make()
        h = gabor.dual_window(g, lat)
        r = gabor.wexler_raz_verify(g, h, lat, Kmax=6, Mmax=6)
        worst[name] = (r.origin_residual, r.off_origin_max)
        ok &= r.origin_residual <= 1e-8 and r.off_origin_max <= 1e-8
    detail = "; ".join(f"{k}: |<h,g>-ab|={a:.1e} off={b:.1e}" for k, (a, b) in worst.items())
    record(5, ok, detail)


def test_criterion_06_estimator_ordering():
    rng = np.random.default_rng(6)
    lattices = [(1, 1), (0.5, 1), (1, 0.5), (0.75, 1), (2 / 3, 1), (0.5, 0.5), (1.5, 0.5), (0.4, 2), (0.25, 1)]
    violations, slack = 0, 1e-9
    for _ in range(50):
        a, b = lattices[rng.integers(len(lattices))]
        lat = Lattice(a, b, M=60)
        g = random_window(rng, lat.step, 2.5 / b)
        _, B = gabor.gabor_frame_bounds(g, lat)
        est = gabor.bessel_estimates(g, lat)
        good = B <= est.cc + slack and est.cc <= est.daubechies + slack and B <= est.schur + slack
        violations += not good
    record(6, violations == 0, f"violations={violations} of 50 random windows/lattices")


def test_criterion_07_adjoint_lattice():
    ratios = {}
    for name, make in SYSTEMS.items():
        g, lat = make()
        B = gabor.gabor_frame_bounds(g, lat).upper
        Badj = gabor.gabor_frame_bounds(g, lat.adjoint()).upper
        ratios[name] = Badj / (lat.a * lat.b * B)
    ok = all(abs(r - 1) <= 0.02 for r in ratios.values())
    record(7, ok, "; ".join(f"{k}: B'/(abB)={v:.6f}" for k, v in ratios.items()))


def test_criterion_08_space_classification():
    Y, N = Verdict.YES, Verdict.NO
    expected = {1: (N, Y, Y, Y), 2: (N, N, Y, Y), 3: (N, N, N, Y)}
    got = {k: spaces.classify_space(spaces.paper_window(k), 1.0).pattern for k in expected}
    ok = got == expected
    record(8, ok, " / ".join(f"f{k}:{''.join(v.value[0] for v in p)}" for k, p in got.items()))


def test_criterion_09_module_layer():
    rng = np.random.default_rng(9)
    # elements fill cells -1..1 of length 3, so each fiber holds 10 generic vectors in C^3
    step, N = 1.0 / 64, 1
    n = 9 * 64
    ws = [from_samples(rng.standard_normal(n) + 1j * rng.standard_normal(n), step, start=-3 * 64) for _ in range(10)]
    seq = ModuleSequence([spaces.fiberize(w, 3.0, N=N) for w in ws])

    bounds = tuple(hmod.weak_frame_bounds(seq))
    perm_ok = all(tuple(hmod.weak_frame_bounds(seq.permuted(rng.permutation(10)))) == bounds for _ in range(10))

    cs_ok = True
    for x in seq:
        for y in seq:
            xy = hmod.inner_product(x, y).samples
            xx, yy = hmod.inner_product(x, x).samples.real, hmod.inner_product(y, y).samples.real
            cs_ok &= bool(np.all(np.abs(xy) ** 2 <= xx * yy * (1 + 1e-12) + 1e-300))

    dil = ModuleSequence([spaces.fiberize(spaces.dilate(w, 3.0, 2.0), 2.0, N=N) for w in ws])
    D = 2 * N + 1
    Q = np.linalg.qr(rng.standard_normal((seq.M, D, D)) + 1j * rng.standard_normal((seq.M, D, D)))[0]
    rot = ModuleSequence([ModuleVector(3.0, np.einsum("mij,jm->im", Q, x.data)) for x in seq])
    inv = max(
        np.max(np.abs(np.subtract(tuple(hmod.weak_frame_bounds(s)), bounds))) for s in (dil, rot)
    )

    dual = hmod.canonical_dual(seq)
    recon = 0.0
    for _ in range(5):
        x = spaces.fiberize(random_window(rng, step, 2.5), 3.0, N=N)
        recon = max(recon, hmod.module_norm(hmod.reconstruct(x, seq, dual) - x) / hmod.module_norm(x))

    emb = 0
    for _ in range(100):
        f = random_window(rng, step, 4.0)
        P = float(rng.choice([0.25, 0.5, 1.0, 2.0, 3.0]))
        emb += spaces.l2_norm(f) > math.sqrt(P) * spaces.lp_l2_norm(f, P) * (1 + 1e-12)

    ok = perm_ok and cs_ok and inv <= 1e-10 and recon <= 1e-8 and emb == 0
    record(
        9,
        ok,
        f"perm_exact={perm_ok} cauchy_schwarz={cs_ok} invariance={inv:.1e} recon={recon:.1e} embedding_violations={emb}",
    )


def test_criterion_10_rational_norm_equivalence():
    a, c = 3.0, 2.0
    sp, sq = spaces.norm_equivalence_factors(a, c)
    rng = np.random.default_rng(10)
    step = 1.0 / 32
    bad_p = bad_q = 0
    for _ in range(100):
        f = random_window(rng, step, 8.0)
        na, nc = spaces.lp_l2_norm(f, a), spaces.lp_l2_norm(f, c)
        bad_p += nc > sp * na * (1 + 1e-12)
        bad_q += na > sq * nc * (1 + 1e-12)
    ok = (sp, sq) == (math.sqrt(3), math.sqrt(2)) and bad_p == 0 and bad_q == 0
    record(10, ok, f"factors=({sp:.6f}, {sq:.6f}) violations sqrt(p)={bad_p} sqrt(q)={bad_q}")


@pytest.mark.slow
def test_criterion_11_walnut_tail():
    g, lat = gaussian_system()
    _, tail_c = gabor.walnut_apply(g, g, lat, spaces.rect(0.0, lat.period), K=8)
    compact_ok = bool(np.all(tail_c < 1e-8))

    lat3 = Lattice(1.0, 2.0, M=2**17)
    f3 = spaces.paper_window(3, bumps=18)
    _, tail3 = gabor.walnut_apply(f3, f3, lat3, spaces.rect(0.0, 1.0), K=40)
    held = tail3[:32] >= 0.5 * tail3[0]
    f3_ok = tail3[0] > 0 and bool(np.all(held))
    record(
        11,
        compact_ok and f3_ok,
        f"compact max tail={tail_c.max():.1e}; f3 t1={tail3[0]:.3f} min(t1..t32)={tail3[:32].min():.3f}",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
