import logging
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)


def execute_all(fn, items, threads=1):
    """Apply fn to every item, in input order. threads > 1 fans out over a
    thread pool; callers reduce the results themselves."""
    if threads <= 1:
        return [fn(item) for item in items]
    items = list(items)
    logger.debug("running %d tasks on %d threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
