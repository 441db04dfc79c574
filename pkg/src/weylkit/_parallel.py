"""Deterministic chunked map over spectral points.

The points are split into fixed-size chunks independent of the thread
count, so results are bit-identical whether one or many threads run.
``WEYLKIT_THREADS`` caps the pool size (default 1).
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 2048


def thread_count():
    try:
        n = int(os.environ.get("WEYLKIT_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def chunked_map(func, points, chunk=CHUNK):
    """Apply ``func`` to consecutive chunks of ``points`` and concatenate."""
    points = np.asarray(points)
    if points.size <= chunk:
        return func(points)
    parts = [points[i : i + chunk] for i in range(0, points.size, chunk)]
    n = min(thread_count(), len(parts))
    if n == 1:
        results = [func(p) for p in parts]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(func, parts))
    return np.concatenate(results, axis=0)
