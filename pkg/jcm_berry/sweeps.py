"""
Parallel parameter sweeps (fan-out/fan-in).

Points are independent and pure, so they are fanned out to worker threads
through `asyncio.to_thread` under a semaphore; results come back in input
order whatever the completion order.

    sweep = ParallelSweep(evaluate_point, workers=4)
    rows = await sweep.run(points)
"""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Sequence
from typing import Generic, TypeVar

from jcm_berry.log import get_logger
from jcm_berry.settings import get_settings

log = get_logger(__name__)

P = TypeVar("P")
R = TypeVar("R")


class ParallelSweep(Generic[P, R]):
    """Evaluate a function over many parameter points with bounded concurrency."""

    def __init__(
        self,
        evaluate: Callable[[P], R],
        workers: int | None = None,
        on_result: Callable[[int, R], None] | None = None,
    ) -> None:
        """
        Args:
            evaluate: Pure function of one point
            workers: Maximum points in flight (default: settings.workers)
            on_result: Called with (index, result) as each point finishes
        """
        self.evaluate = evaluate
        self.workers = workers or get_settings().workers
        self.on_result = on_result

    async def run(self, points: Sequence[P]) -> list[R]:
        if not points:
            return []
        semaphore = asyncio.Semaphore(self.workers)

        async def one(index: int, point: P) -> R:
            async with semaphore:
                result = await asyncio.to_thread(self.evaluate, point)
            if self.on_result is not None:
                self.on_result(index, result)
            return result

        log.debug("sweep_start", points=len(points), workers=self.workers)
        # gather preserves input order; the first exception propagates
        results = await asyncio.gather(*(one(i, p) for i, p in enumerate(points)))
        log.debug("sweep_done", points=len(results))
        return list(results)


def run_sweep(
    evaluate: Callable[[P], R],
    points: Sequence[P],
    workers: int | None = None,
    on_result: Callable[[int, R], None] | None = None,
) -> list[R]:
    """Synchronous wrapper around ParallelSweep.run."""
    return asyncio.run(ParallelSweep(evaluate, workers, on_result).run(points))
