"""Backend selection for the hot kernels.

Every performance-critical inner loop in :mod:`czeta.kernels` exists twice:
a numba ``@njit`` version and a pure numpy/python fallback.  Selection is
controlled by the ``CZETA_BACKEND`` environment variable:

    CZETA_BACKEND=numba   force numba (error if unavailable)
    CZETA_BACKEND=numpy   force the fallback path
    CZETA_BACKEND=auto    numba when importable (default)

``benchmarks/bench_kernels.py`` compares the two paths head to head.
"""

from __future__ import annotations

import os

_MODE = os.environ.get("CZETA_BACKEND", "auto").lower()
if _MODE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"CZETA_BACKEND must be auto|numba|numpy, got {_MODE!r}")

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    HAS_NUMBA = False
    numba = None

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco

    prange = range

if _MODE == "numba" and not HAS_NUMBA:
    raise RuntimeError("CZETA_BACKEND=numba but numba is not importable")

USE_NUMBA = HAS_NUMBA and _MODE != "numpy"


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def set_num_threads(n: int) -> None:
    """Set worker threads for numba kernels; 0 means all cores."""
    if USE_NUMBA:
        if n <= 0:
            n = numba.config.NUMBA_DEFAULT_NUM_THREADS
        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_DEFAULT_NUM_THREADS)))


def pick(numba_impl, numpy_impl):
    """Return the active implementation for a kernel pair."""
    return numba_impl if USE_NUMBA else numpy_impl
