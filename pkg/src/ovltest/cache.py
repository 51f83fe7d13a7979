"""On-disk cache of exact distributions, one CSV file per ``(q, m, n)``."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Callable

from .errors import InputError
from .naive_dist import ExactDistribution

log = logging.getLogger(__name__)

ENV_VAR = "OVL_CACHE_DIR"


def resolve_cache_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    value = explicit if explicit is not None else os.environ.get(ENV_VAR)
    return Path(value) if value else None


def cache_path(cache_dir: Path, q: int, m: int, n: int) -> Path:
    return cache_dir / f"ovl_q{q}_m{m}_n{n}.csv"


def load_or_compute(
    cache_dir: str | os.PathLike | None,
    q: int,
    m: int,
    n: int,
    compute: Callable[[], ExactDistribution],
) -> ExactDistribution:
    directory = resolve_cache_dir(cache_dir)
    if directory is None:
        return compute()
    path = cache_path(directory, q, m, n)
    if path.exists():
        try:
            return ExactDistribution.from_csv(path.read_text(encoding="utf-8"), m, n, q)
        except InputError as exc:
            log.warning("ignoring corrupt cache file %s: %s", path, exc)
    dist = compute()
    directory.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(dist.to_csv(), encoding="utf-8")
    tmp.replace(path)
    return dist
