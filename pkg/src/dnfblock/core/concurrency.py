"""Thread pool sizing and work chunking."""

import os
from collections.abc import Iterator, Sequence

__all__: list[str] = ["chunks", "worker_count"]

CHUNK_SIZE = 2_048


def worker_count(threads: int) -> int:
    """Thread pool size; 0 means every available core."""
    return threads if threads > 0 else (os.cpu_count() or 1)


def chunks[T](items: Sequence[T], size: int = CHUNK_SIZE) -> Iterator[Sequence[T]]:
    """Consecutive slices of ``items``, in order."""
    for start in range(0, len(items), size):
        yield items[start : start + size]
