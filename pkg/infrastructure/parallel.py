"""Deterministic thread-pool helpers."""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Apply fn to every item, preserving input order.

    With workers <= 1 the map runs inline. Results never depend on the worker
    count because each item is computed independently and collected in order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def chunk_ranges(total: int, chunk_size: int) -> list[tuple[int, int]]:
    """Split range(total) into fixed (start, count) chunks."""
    return [(start, min(chunk_size, total - start)) for start in range(0, total, chunk_size)]
