"""Selects between the numba kernels and the pure-numpy fallbacks.

The environment variable CAVITY_PACKETS_BACKEND picks the implementation:

    auto    numba when importable, numpy otherwise (default)
    numba   require the numba kernels, error if numba is missing
    numpy   force the pure-numpy fallbacks

set_backend() switches at runtime (used by tests and benchmarks); both
implementations are numerically interchangeable to roundoff.
"""

from __future__ import annotations

import logging
import os

log = logging.getLogger(__name__)

_active: str | None = None
_kernels = None


def _load(name: str):
    if name == "numpy":
        from . import kernels_numpy as mod
        return mod
    from . import kernels_numba as mod
    return mod


def set_backend(name: str) -> None:
    """Force 'numba' or 'numpy' kernels for the current process."""
    global _active, _kernels
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend '{name}' (use 'numba' or 'numpy')")
    _kernels = _load(name)
    _active = name


def active_backend() -> str:
    if _active is None:
        _init_from_env()
    return _active


def kernels():
    """Return the active kernel module."""
    if _kernels is None:
        _init_from_env()
    return _kernels


def _init_from_env() -> None:
    choice = os.environ.get("CAVITY_PACKETS_BACKEND", "auto").strip().lower()
    if choice == "auto":
        try:
            set_backend("numba")
        except ImportError:
            log.info("numba unavailable, falling back to numpy kernels")
            set_backend("numpy")
    else:
        set_backend(choice)
