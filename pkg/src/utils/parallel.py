"""
Trial Execution Helpers
Maps independent Monte Carlo trials over a worker pool.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

from src.core.logger import get_logger

T = TypeVar("T")
R = TypeVar("R")

logger = get_logger(__name__)


def map_trials(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Apply func to every item, preserving input order.

    Args:
        func: Picklable callable (module-level function or functools.partial)
        items: Trial descriptors
        workers: Pool width; 1 runs in-process

    Returns:
        Results in the order of items
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    chunksize = max(1, len(items) // (4 * workers))
    logger.debug(f"Dispatching {len(items)} trials to {workers} workers (chunksize={chunksize})")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items, chunksize=chunksize))
