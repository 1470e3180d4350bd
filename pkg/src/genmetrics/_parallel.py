"""Row-chunked thread execution whose results never depend on worker count.

Work is always cut into the same fixed-size chunks; the worker count only
decides how many chunks run at once, so every output entry is produced by
identical arithmetic whatever ``GENMETRICS_THREADS`` says.
"""

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "GENMETRICS_THREADS"
CHUNK_ROWS = 128


def worker_count():
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            value = 1
        return max(1, value)
    return max(1, min(os.cpu_count() or 1, 8))


def chunk_bounds(n, chunk=CHUNK_ROWS):
    return [(start, min(start + chunk, n)) for start in range(0, n, chunk)]


def map_chunks(fn, n, chunk=CHUNK_ROWS):
    """Apply ``fn(start, stop)`` to consecutive row ranges covering ``range(n)``.

    Returns the list of per-chunk results in row order.
    """
    bounds = chunk_bounds(n, chunk)
    workers = min(worker_count(), len(bounds))
    if workers <= 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def map_items(fn, items):
    """Ordered parallel map over independent items."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
