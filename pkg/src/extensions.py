"""
Process-wide shared objects: logging setup and the worker pool used to solve independent
sweep rows. Nothing here holds numerical state.
"""

import logging
from concurrent.futures import ProcessPoolExecutor  # Sweep rows are independent processes
from typing import Any, Callable, Iterable, TypeVar  # Used for type hints

T = TypeVar("T")
R = TypeVar("R")

LOG_FORMAT = "%(asctime)s level=%(levelname)s logger=%(name)s %(message)s"


def configure_logging(level: str | int = "INFO") -> None:
    """Install a single stream handler on the root logger, replacing earlier ones"""

    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def map_rows(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Apply func to every item, in worker processes when workers > 1. Results come back in
    input order either way, so output files do not depend on scheduling.
    """

    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))


def import_string(dotted: str) -> Any:
    """Resolve 'module.Attribute' to the attribute, e.g. 'config.DevConfig'"""

    module_name, _, attribute = dotted.rpartition(".")
    module = __import__(module_name, fromlist=[attribute])
    return getattr(module, attribute)
