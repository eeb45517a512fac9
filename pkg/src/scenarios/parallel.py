"""
Parallel task runner for HyperChua sweeps
Static block partition over a process pool; results come back in task order.
"""

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)


def resolve_workers(workers: Optional[int]) -> int:
    """Requested worker count, defaulting to the available cores"""
    if workers is None:
        return os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def run_tasks(func: Callable[[T], R], tasks: Sequence[T],
              workers: Optional[int] = None) -> List[R]:
    """Apply a picklable module-level function to every task

    Tasks are split into contiguous blocks of ceil(n / workers) so each
    worker gets one block; workers = 1 runs inline in this process.
    """
    workers = min(resolve_workers(workers), max(len(tasks), 1))
    if workers == 1:
        return [func(task) for task in tasks]
    chunksize = math.ceil(len(tasks) / workers)
    logger.debug(f"Running {len(tasks)} tasks on {workers} workers (chunksize {chunksize})")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunksize))
