"""Deterministic thread fan-out and seeded random streams."""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

THREADS_ENV = "SPINMECH_THREADS"


def default_threads():
    value = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def ordered_map(fn, items, threads=None):
    """``list(map(fn, items))`` evaluated on up to ``threads`` workers.

    Results come back in input order, so any reduction over them is
    independent of the thread count.
    """
    items = list(items)
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def make_rng(seed, stream=0):
    """Generator for stream ``stream`` of ``seed``; streams are independent."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(seq))
