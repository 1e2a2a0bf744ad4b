"""Thread pool helper shared by enumeration, averaging and per-class loops.

Results always come back in input order, so output never depends on the
number of threads.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def default_threads() -> int:
    return max(1, int(os.environ.get("MCKAY_THREADS", "1")))


def pmap(fn, items, threads: int | None = None) -> list:
    items = list(items)
    workers = default_threads() if threads is None else max(1, threads)
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
