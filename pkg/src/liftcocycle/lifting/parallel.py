"""Fork-based parallel map for closures over unpicklable contexts.

Workers inherit the task function through ``fork``; only integer indices go
in and exact scalars come out, so results are identical for any worker count.
"""
from __future__ import annotations

import multiprocessing
import os
from typing import Callable

JOBS_ENV = "LIFTCOCYCLE_JOBS"

_TASK: Callable | None = None


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def _run(i):
    return _TASK(i)


def pmap(fn: Callable[[int], object], count: int, jobs: int) -> list:
    global _TASK
    if jobs <= 1 or count <= 1 or "fork" not in multiprocessing.get_all_start_methods():
        return [fn(i) for i in range(count)]
    _TASK = fn
    try:
        with multiprocessing.get_context("fork").Pool(min(jobs, count)) as pool:
            return pool.map(_run, range(count), chunksize=1)
    finally:
        _TASK = None
