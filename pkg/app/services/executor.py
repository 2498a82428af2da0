from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_EXECUTOR: Optional[ThreadPoolExecutor] = None
_EXECUTOR_WORKERS: int = 0


def _env_int(name: str, *, default: int = 0) -> int:
    """Return an env variable as a non-negative int, falling back to ``default``."""
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        parsed = int(value.strip())
    except ValueError:
        logger.warning("executor: ignoring non-integer %s=%r", name, value)
        return default
    if parsed < 0:
        logger.warning("executor: ignoring negative %s=%r", name, value)
        return default
    return parsed


def configured_workers() -> int:
    """Worker count from ISOGEO4_THREADS; 0 means one per CPU."""
    requested = _env_int("ISOGEO4_THREADS", default=0)
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def get_executor() -> Optional[ThreadPoolExecutor]:
    """Return a cached pool sized from the environment, or None when running serially."""
    global _EXECUTOR, _EXECUTOR_WORKERS
    workers = configured_workers()
    if workers <= 1:
        return None
    if _EXECUTOR is None or workers != _EXECUTOR_WORKERS:
        if _EXECUTOR is not None:
            _EXECUTOR.shutdown(wait=True)
        _EXECUTOR = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="isogeo4")
        _EXECUTOR_WORKERS = workers
        logger.debug("executor: started pool with %d workers", workers)
    return _EXECUTOR


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """``[fn(x) for x in items]``, possibly on the pool; results keep input order."""
    batch = list(items)
    executor = get_executor() if len(batch) > 1 else None
    if executor is None:
        return [fn(item) for item in batch]
    return list(executor.map(fn, batch))
