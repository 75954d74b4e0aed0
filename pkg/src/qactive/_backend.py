"""Kernel backend selection.

The hot per-step kernels exist twice: a loop version compiled with numba and a
vectorised NumPy version. ``QACTIVE_BACKEND=numpy`` forces the NumPy path;
otherwise numba is used whenever it imports. Both paths compute the same
arithmetic, so results agree to rounding.
"""

from __future__ import annotations

import contextlib
import os

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _numba_njit = None
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def _initial_backend() -> str:
    name = os.environ.get("QACTIVE_BACKEND", "").strip().lower()
    if name == "":
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"QACTIVE_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("QACTIVE_BACKEND=numba but numba is not importable")
    return name


_current = _initial_backend()


def get_backend() -> str:
    return _current


def set_backend(name: str) -> None:
    global _current
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba is not importable")
    _current = name


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily switch the kernel backend."""
    previous = _current
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)
