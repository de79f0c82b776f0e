"""Environment configuration for eqcoin.

Command-line flags cover every run parameter; the environment only supplies
defaults for the random seed and the on-disk sweep cache.
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from eqcoin.exceptions import EqcoinConfigError

# Load environment variables from .env file if present
load_dotenv()

__all__ = ["get_default_seed", "get_cache_dir", "cache_enabled"]

_FALSY = {"0", "false", "no", "off"}


def get_default_seed(seed: Optional[int] = None, use_fallback: bool = True) -> int:
    """Get the sampling seed from argument or EQCOIN_SEED environment variable.

    Args:
        seed: Optional explicit seed. If not provided, will check environment.
        use_fallback: Whether to fall back to seed 0 if nothing is configured.

    Returns:
        Integer seed.

    Raises:
        EqcoinConfigError: If EQCOIN_SEED is not an integer, or if no seed is
            configured and use_fallback is False.
    """
    if seed is not None:
        return seed

    env_seed = os.getenv("EQCOIN_SEED")
    if env_seed:
        try:
            return int(env_seed)
        except ValueError as e:
            raise EqcoinConfigError(
                f"EQCOIN_SEED must be an integer, got {env_seed!r}"
            ) from e

    if use_fallback:
        return 0

    raise EqcoinConfigError("EQCOIN_SEED environment variable not set")


def get_cache_dir(cache_dir: Optional[str] = None) -> Path:
    """Get the sweep cache directory from argument or EQCOIN_CACHE_DIR.

    Args:
        cache_dir: Optional directory path. If not provided, will check environment.

    Returns:
        Cache directory path, defaulting to ~/.eqcoin_cache.
    """
    if cache_dir is not None:
        return Path(cache_dir)

    env_dir = os.getenv("EQCOIN_CACHE_DIR")
    if env_dir:
        return Path(env_dir)

    return Path.home() / ".eqcoin_cache"


def cache_enabled(flag: Optional[bool] = None) -> bool:
    """Decide whether sweep results are cached on disk.

    Args:
        flag: Explicit override. If not provided, EQCOIN_CACHE is consulted;
            "0", "false", "no" and "off" disable caching.

    Returns:
        True unless caching was switched off.
    """
    if flag is not None:
        return flag

    env_flag = os.getenv("EQCOIN_CACHE")
    if env_flag:
        return env_flag.strip().lower() not in _FALSY

    return True
