#!/usr/bin/env python3
"""
Helper Functions Module
Small parsing and concurrency helpers used across the commands
"""

import concurrent.futures
import logging
import re
from typing import Any, Callable, Iterable, List, Sequence, Tuple

logger = logging.getLogger(__name__)


def parse_grid(grid: str) -> Tuple[int, int]:
    """Parse ROWSxCOLS into (rows, cols)"""
    match = re.match(r'^\s*(\d+)\s*[xX]\s*(\d+)\s*$', grid or "")
    if not match:
        raise ValueError(f"grid must look like 5x8, got {grid!r}")
    return int(match.group(1)), int(match.group(2))


def format_duration(seconds: float) -> str:
    """Format seconds to a short human readable duration"""
    seconds = int(round(seconds))
    if seconds < 60:
        return f"{seconds}s"
    minutes, secs = divmod(seconds, 60)
    if minutes < 60:
        return f"{minutes}m {secs}s" if secs else f"{minutes}m"
    hours, minutes = divmod(minutes, 60)
    return f"{hours}h {minutes}m" if minutes else f"{hours}h"


def chunked(items: Sequence[Any], size: int) -> Iterable[Sequence[Any]]:
    """Consecutive slices of at most `size` items"""
    for start in range(0, len(items), size):
        yield items[start:start + size]


def run_ordered(tasks: List[Callable[[], Any]], max_workers: int = 1) -> List[Any]:
    """Run tasks on a thread pool and return results in submission order.

    Exceptions propagate from the first failing task (in submission order).
    With max_workers=1 the tasks run inline.
    """
    if max_workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]

    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(task) for task in tasks]
        concurrent.futures.wait(futures)
        return [future.result() for future in futures]
