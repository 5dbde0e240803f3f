# Bounded thread pool for the per-facet and per-chunk loops. Results come
# back in input order so every output built from them is deterministic.

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_configured_workers: Optional[int] = None


def configure_workers(threads: Optional[int]) -> None:
    """Pin the pool size; None or 0 means fall back to POLYCOVER_THREADS / core count."""
    global _configured_workers
    if threads is not None and threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    _configured_workers = threads or None


def max_workers() -> int:
    if _configured_workers:
        return _configured_workers
    env = os.getenv("POLYCOVER_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"POLYCOVER_THREADS={env!r} is not an integer") from None
        if value > 0:
            return value
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug("mapping %d items on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
