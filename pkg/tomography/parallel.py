"""Execução paralela com redução em ordem fixa.

`map_ordered` devolve os resultados na ordem da entrada, de modo que somas
e mínimos feitos depois não dependem do número de threads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

from .conf import geotom_setting

logger = logging.getLogger(__name__)


def thread_count():
    return max(1, int(geotom_setting('THREADS')))


def map_ordered(fn, items):
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug('map_ordered: %d itens em %d threads', len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
