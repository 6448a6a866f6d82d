"""Worker pool for the embarrassingly parallel stages.

Work items are pure functions of read-only data. Results are returned in
input order so that downstream merges stay deterministic.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import anyio
import anyio.to_thread

from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)


def _chunks[T](items: Sequence[T], count: int) -> list[Sequence[T]]:
    size = max(1, -(-len(items) // count))
    return [items[start : start + size] for start in range(0, len(items), size)]


async def _gather_in_threads[T, R](func: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    limiter = anyio.CapacityLimiter(workers)
    batches = _chunks(items, workers * 4)
    results: list[list[R]] = [[] for _ in batches]

    def run_batch(batch: Sequence[T]) -> list[R]:
        return [func(item) for item in batch]

    async def run(index: int, batch: Sequence[T]) -> None:
        results[index] = await anyio.to_thread.run_sync(run_batch, batch, limiter=limiter)

    async with anyio.create_task_group() as tg:
        for index, batch in enumerate(batches):
            tg.start_soon(run, index, batch)

    return [value for batch_result in results for value in batch_result]


def map_in_workers[T, R](func: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Apply ``func`` to every item, optionally across worker threads.

    Args:
        func: Pure function of one item
        items: Work items
        workers: Number of worker threads; ``1`` runs inline

    Returns:
        Results in the order of ``items``
    """
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("Dispatching work items", extra={"items": len(items), "workers": workers})
    return anyio.run(_gather_in_threads, func, items, workers)
