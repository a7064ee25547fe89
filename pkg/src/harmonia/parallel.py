"""Thread-pool fan-out for independent pure computations."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from typing import TypeVar

from joblib import Parallel, delayed
from joblib.parallel import cpu_count

from .config import load_settings

T = TypeVar("T")
R = TypeVar("R")

# Below this many tasks the pool start-up costs more than it saves.
_MIN_PARALLEL_TASKS = 8


def resolve_n_jobs(n_jobs: int | None = None) -> int:
    """``n_jobs`` if given, else ``HARMONIA_THREADS``, else every core."""

    if n_jobs is None:
        n_jobs = load_settings(env_file=None).n_jobs
    if n_jobs == -1:
        return cpu_count()
    if n_jobs < 1:
        raise ValueError(f"n_jobs must be positive or -1, got {n_jobs}")
    return min(cpu_count(), n_jobs)


def parallel_map(
    function: Callable[[T], R], inputs: Sequence[T], n_jobs: int | None = None
) -> list[R]:
    """``[function(x) for x in inputs]``, possibly on threads; order is always preserved."""

    workers = resolve_n_jobs(n_jobs)
    if workers == 1 or len(inputs) < _MIN_PARALLEL_TASKS:
        return [function(item) for item in inputs]
    results = Parallel(n_jobs=workers, prefer="threads")(delayed(function)(item) for item in inputs)
    return list(results)
