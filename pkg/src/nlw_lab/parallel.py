"""Index-ordered parallel map shared by the experiment drivers."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
U = TypeVar("U")

JOBS_ENV = "NLW_LAB_JOBS"


def resolve_jobs(jobs: int | None = None) -> int:
    """Explicit value, else ``$NLW_LAB_JOBS``, else the logical core count."""
    if jobs is None:
        env = os.environ.get(JOBS_ENV, "").strip()
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise ValueError(f"{JOBS_ENV} must be an integer, got {env!r}") from None
        else:
            jobs = os.cpu_count() or 1
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    return jobs


def pmap(fn: Callable[[T], U], items: Iterable[T], jobs: int | None = None) -> list[U]:
    """``[fn(x) for x in items]`` evaluated on a process pool.

    Results come back in input order, so reductions over them are
    deterministic regardless of scheduling. ``fn`` must be picklable.
    """
    items = list(items)
    jobs = min(resolve_jobs(jobs), max(len(items), 1))
    if jobs == 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))
