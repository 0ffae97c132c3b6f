import threading
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from tqdm import tqdm

from ..config import settings

T = TypeVar('T')
R = TypeVar('R')

_worker = threading.local()


def in_pool_worker() -> bool:
    return getattr(_worker, 'active', False)


def ordered_map(
    func: Callable[[T], R],
    items: Iterable[T],
    workers: int | None = None,
    progress: str | None = None,
) -> list[R]:
    """Apply func on a thread pool; results come back in input order whatever the completion order.

    A call made from inside a pool worker runs serially, so nested maps stay
    within the thread cap. `progress` labels a tqdm bar, shown only in debug mode.
    """
    items = list(items)
    max_workers = workers if workers is not None else settings.THREADS
    show = progress is not None and settings.DEBUG_MODE
    if max_workers == 1 or len(items) <= 1 or in_pool_worker():
        return [func(item) for item in tqdm(items, desc=progress, disable=not show)]

    def call(item: T) -> R:
        _worker.active = True
        try:
            return func(item)
        finally:
            _worker.active = False

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(tqdm(pool.map(call, items), total=len(items), desc=progress, disable=not show))
