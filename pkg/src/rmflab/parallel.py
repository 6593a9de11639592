"""Deterministic chunked parallel map.

Work is split into fixed-size chunks by item index; results come back in
chunk order regardless of scheduling, so any reduction over them is
independent of the worker-pool width. Workers receive (lo, hi) half-open
index ranges and must be pure (no shared mutable state).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

CHUNK = 256


def default_width() -> int:
    env = os.environ.get("RMFLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def map_chunks(work, n_items: int, width: int | None = None, chunk: int = CHUNK) -> list:
    """Apply work(lo, hi) over fixed chunks of range(n_items), in order."""
    if n_items <= 0:
        return []
    if width is None:
        width = default_width()
    bounds = [(lo, min(lo + chunk, n_items)) for lo in range(0, n_items, chunk)]
    if width <= 1 or len(bounds) == 1:
        return [work(lo, hi) for lo, hi in bounds]
    with ThreadPoolExecutor(max_workers=width) as pool:
        futures = [pool.submit(work, lo, hi) for lo, hi in bounds]
        return [f.result() for f in futures]
