"""Worker-pool plumbing. All parallelism in the package funnels through here."""

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "FRACDIM_THREADS"


def worker_count() -> int:
    """Worker cap from FRACDIM_THREADS (0 or unset means auto)."""
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0, got {n}")
    if n == 0:
        return os.cpu_count() or 1
    return n


def ordered_map(fn, items):
    """Map fn over items, preserving input order in the result list.

    Tasks must be pure; results are identical for any worker count.
    """
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
