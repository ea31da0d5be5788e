"""Order-preserving partitioned evaluation over numpy arrays."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .config import thread_count

logger = logging.getLogger(__name__)

# smallest chunk handed to a worker
_MIN_CHUNK = 256


def partitioned_map(
    func: Callable[[np.ndarray], np.ndarray],
    values: np.ndarray,
    *,
    threads: int | None = None,
) -> np.ndarray:
    """
    Evaluate ``func`` on contiguous chunks of ``values`` and concatenate in input order.

    ``func`` must be elementwise, so the merged result is identical for any
    partitioning and any worker count.
    """
    values = np.asarray(values)
    workers = thread_count(threads)
    if workers == 1 or values.size < 2 * _MIN_CHUNK:
        return np.asarray(func(values))

    n_chunks = min(workers, values.size // _MIN_CHUNK)
    chunks = np.array_split(values, n_chunks)
    logger.debug("Evaluating %d samples in %d chunks on %d threads", values.size, n_chunks, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(func, chunks))
    return np.concatenate([np.asarray(part) for part in results])
