"""Fiber-parallel evaluation.

The fiber axis is split into contiguous chunks which are processed by a
thread pool (LAPACK releases the GIL) and concatenated in fiber order, so
results never depend on scheduling.  ``GABOR_FIBER_THREADS`` caps the
number of worker threads; the default is one.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_THREADS = "GABOR_FIBER_THREADS"


def fiber_threads():
    raw = os.environ.get(ENV_THREADS, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def map_fibers(func, *arrays):
    """Apply ``func`` to chunks of ``arrays`` along axis 0 and concatenate.

    ``func`` must return one array (or a tuple of arrays) whose leading axis
    matches the chunk length.
    """
    n = arrays[0].shape[0]
    workers = min(fiber_threads(), n)
    if workers <= 1:
        return func(*arrays)
    bounds = np.linspace(0, n, workers + 1).astype(int)
    chunks = [tuple(a[lo:hi] for a in arrays) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: func(*c), chunks))
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(p, axis=0) for p in zip(*parts))
    return np.concatenate(parts, axis=0)
