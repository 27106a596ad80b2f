"""
Block-parallel worker pool

Splits block indices into ordered chunks and maps a worker function over
them. Results come back in chunk order, so concatenating them reproduces
the serial result exactly.
"""
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence

from ..utils import get_logger

logger = get_logger(__name__)

CHUNKS_PER_WORKER = 4


def split_chunks(indices: Sequence[int], parts: int) -> List[List[int]]:
    """Split indices into at most `parts` contiguous, ordered chunks"""
    indices = list(indices)
    parts = max(1, min(parts, len(indices)))
    size, extra = divmod(len(indices), parts)
    chunks, start = [], 0
    for part in range(parts):
        stop = start + size + (1 if part < extra else 0)
        chunks.append(indices[start:stop])
        start = stop
    return [chunk for chunk in chunks if chunk]


class BlockExecutor:
    """
    Context manager over a process pool

    With one worker everything runs inline in the calling process.
    """

    def __init__(self, workers: int = 1):
        if workers < 1:
            raise ValueError(f"Worker count must be at least 1, got {workers}")
        self.workers = workers
        self._pool: Optional[Executor] = None

    def __enter__(self) -> "BlockExecutor":
        if self.workers > 1:
            self._pool = ProcessPoolExecutor(max_workers=self.workers)
            logger.debug(f"Started process pool with {self.workers} workers")
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=exc_type is not None)
            self._pool = None

    def map_chunks(self, fn: Callable[..., Any], indices: Sequence[int], *args: Any) -> List[Any]:
        """
        Call fn(*args, chunk) for each chunk of indices

        Returns:
            Per-chunk results in index order
        """
        if len(indices) == 0:
            return []
        if self._pool is None:
            return [fn(*args, list(indices))]

        chunks = split_chunks(indices, self.workers * CHUNKS_PER_WORKER)
        futures = [self._pool.submit(fn, *args, chunk) for chunk in chunks]
        return [future.result() for future in futures]

    def map_blocks(self, fn: Callable[..., List[Any]], indices: Sequence[int],
                   *args: Any) -> List[Any]:
        """Flattened per-block results of a chunk function returning lists"""
        results = []
        for chunk_result in self.map_chunks(fn, indices, *args):
            results.extend(chunk_result)
        return results
