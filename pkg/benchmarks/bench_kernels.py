"""Compare the compiled and numpy kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on identical inputs through both backends; the table
reports the best wall time and the max absolute difference of the outputs.
"""
import argparse
import timeit

import numpy as np

from gaborfiber import _kernels_py

try:
    from gaborfiber import _kernels
except ImportError:
    _kernels = None


def cvec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def cases(rng):
    # fold at the scale of the long-tail walnut check: ~5e5 samples, period 2^18
    h = cvec(rng, 500_000)
    yield "fold_product (5e5 samples)", lambda m: m.fold_product(h, -1000, h, -1000, 3 * 2**17, 2**17)

    g = cvec(rng, 4096)
    shifts = np.arange(-17, 18) * 512
    yield "correlation_stack (35 x 4096)", lambda m: m.correlation_stack(g, -2048, g, -2048, shifts, 512)

    K, nb, na = 8, 512, 256
    G = cvec(rng, (4 * K + 1) * na).reshape(4 * K + 1, na)
    yield "frame_matrix (K=8, 512 fibers)", lambda m: m.frame_matrix(G, -2 * K, K, nb, na, 2.0)

    Gk, f = cvec(rng, na), cvec(rng, 200_000)

    def walnut(m):
        out = np.zeros(220_000, dtype=complex)
        for k in range(-8, 9):
            m.walnut_term(out, -10_000, Gk, f, 0, k * nb, na, 0.5)
        return out

    yield "walnut_term (17 terms, 2e5 samples)", walnut


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':40s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, fn in cases(rng):
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(np.asarray(fn(_kernels_py)) - np.asarray(fn(_kernels)))))
        print(f"{name:40s} {1e3 * t_py:12.2f} {1e3 * t_c:14.2f} {t_py / t_c:8.1f}x {diff:11.1e}")


if __name__ == "__main__":
    main()
