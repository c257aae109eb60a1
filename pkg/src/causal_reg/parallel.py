"""Order-preserving thread fan-out for replications, folds and path points."""

from __future__ import annotations

import contextvars
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """fn over items, results in input order whatever the thread count.

    Work items must be independent; callers derive any randomness from
    per-item seeds so scheduling never changes a result.
    """
    seq = list(items)
    if threads <= 1 or len(seq) <= 1:
        return [fn(item) for item in seq]
    # one context copy per item: a Context cannot be entered by two threads at once
    contexts = [contextvars.copy_context() for _ in seq]
    with ThreadPoolExecutor(max_workers=min(threads, len(seq))) as pool:
        return list(pool.map(lambda ctx, item: ctx.run(fn, item), contexts, seq))
