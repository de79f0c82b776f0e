"""On-disk caching for uniqueness sweep reports.

Uses diskcache for persistent caching that survives between runs.

The cache directory can be configured via the EQCOIN_CACHE_DIR environment
variable. If not set, defaults to ~/.eqcoin_cache.

The cache TTL can be configured via the EQCOIN_CACHE_TTL environment
variable (in seconds). If not set, defaults to 30 days.
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional, cast

from diskcache import Cache  # type: ignore[import-untyped]

from eqcoin.config import get_cache_dir

__all__ = ["get_cache", "get_cached", "set_cached", "make_cache_key", "DEFAULT_TTL"]

# Default TTL: 30 days in seconds, configurable via environment variable
DEFAULT_TTL = int(os.getenv("EQCOIN_CACHE_TTL", str(30 * 24 * 3600)))


@lru_cache(maxsize=None)
def _open_cache(directory: str) -> Cache:
    return Cache(directory=directory)


def get_cache(cache_dir: Optional[Path] = None) -> Cache:
    """Return the diskcache instance for a directory, opening it on first use.

    Args:
        cache_dir: Cache directory. Defaults to ``get_cache_dir()``.
    """
    directory = cache_dir if cache_dir is not None else get_cache_dir()
    return _open_cache(str(directory))


def make_cache_key(obj: Any) -> str:
    """Recursively canonicalize a data structure into a cache key string.

    Dictionaries are sorted by key so that insertion order never changes the
    key. Floats and complex numbers are rendered at full precision.

    Args:
        obj: Input data structure (dict, list, tuple, or scalar).

    Returns:
        A string representation suitable for use as a cache key.

    Raises:
        TypeError: If the structure contains an unsupported type.
    """
    if isinstance(obj, dict):
        return str(sorted((str(k), make_cache_key(v)) for k, v in obj.items()))
    elif isinstance(obj, (list, tuple)):
        return str(tuple(make_cache_key(item) for item in obj))
    elif isinstance(obj, bool):
        return str(obj)
    elif isinstance(obj, complex):
        return f"({obj.real!r},{obj.imag!r})"
    elif isinstance(obj, float):
        return repr(obj)
    elif isinstance(obj, int):
        return str(obj)
    elif isinstance(obj, str):
        return obj
    elif obj is None:
        return "None"
    else:
        raise TypeError(f"Unsupported data type for cache key: {type(obj)}")


def get_cached(key: str, cache_dir: Optional[Path] = None) -> Optional[dict[str, Any]]:
    """Retrieve a cached report.

    Args:
        key: Cache key from ``make_cache_key``.
        cache_dir: Optional cache directory override.

    Returns:
        Cached report data if found, None otherwise.
    """
    result = get_cache(cache_dir).get(key)
    if result is None:
        return None
    return cast(dict[str, Any], result)


def set_cached(
    key: str,
    value: dict[str, Any],
    ttl: int = DEFAULT_TTL,
    cache_dir: Optional[Path] = None,
) -> None:
    """Store a report in the cache with TTL.

    Args:
        key: Cache key from ``make_cache_key``.
        value: Report data to cache.
        ttl: Time to live in seconds. Defaults to DEFAULT_TTL (30 days),
            which can be configured via EQCOIN_CACHE_TTL environment variable.
        cache_dir: Optional cache directory override.
    """
    get_cache(cache_dir).set(key, value, expire=ttl)
