"""Deterministic fan-out for exhaustive sweeps.

Work is split into contiguous chunks, mapped in a process pool and returned in
chunk order.  Callers reduce with exact sums or maxima, so the result does not
depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def split(seq: Sequence[T], parts: int) -> list[list[T]]:
    seq = list(seq)
    parts = max(1, min(parts, len(seq)))
    q, r = divmod(len(seq), parts)
    out, start = [], 0
    for p in range(parts):
        end = start + q + (p < r)
        out.append(seq[start:end])
        start = end
    return out


def map_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def chunked(fn: Callable[[list[T]], R], seq: Sequence[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to contiguous chunks of ``seq`` (one chunk per worker)."""
    chunks = split(seq, workers * 4 if workers > 1 else 1)
    return map_ordered(fn, chunks, workers)
