"""Numba acceleration switch.

Hot inner loops (the Gibbs sampling sweep, sliding-window co-occurrence
counting) ship in two variants: a numba ``@njit`` kernel and a pure
numpy/python path. Both compute bit-identical results; the numba path is
just faster. Selection happens once at import time via the environment
variable ``TOPICBENCH_NUMBA`` ("0"/"false"/"off" disables numba).

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os


def _env_enabled() -> bool:
    raw = os.environ.get("TOPICBENCH_NUMBA", "1").strip().lower()
    return raw not in ("0", "false", "off", "no")


try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but stay importable
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and _env_enabled()


def maybe_njit(func):
    """Apply ``numba.njit(cache=True)`` when acceleration is enabled, else no-op."""
    if NUMBA_ENABLED:
        return _njit(cache=True)(func)
    return func
