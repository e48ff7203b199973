"""
Ordered fan-out of independent jobs over a process pool.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from crvn.core.config import settings


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply ``fn`` to every item, in parallel when more than one worker is configured.

    Results come back in input order regardless of completion order. ``fn`` and
    the items must be picklable when workers > 1.

    Args:
        fn: Module-level function of one argument
        items: Job inputs
        workers: Process count (default WORKERS)
    """
    count = workers or settings.WORKERS
    if count <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.info(f"Dispatching {len(items)} jobs to {count} worker processes")
    with ProcessPoolExecutor(max_workers=count) as executor:
        return list(executor.map(fn, items))
