"""Select between numba-compiled kernels and the interpreted fallback.

Set ``PERIMIN_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python over numpy arrays (and to route distances through scipy.sparse.csgraph).
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("PERIMIN_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_ENABLED = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def jit(fn):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(fn)
    return fn


def python_impl(fn):
    """Underlying Python function of a possibly-jitted kernel."""
    return getattr(fn, "py_func", fn)
