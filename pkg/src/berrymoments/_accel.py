"""Backend selection for the numeric kernels.

Numba is used when importable unless ``BERRYMOMENTS_PURE_NUMPY`` is set to a
true value (``1``, ``true``, ``yes``), in which case every kernel falls back to
its vectorised numpy implementation.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}

PURE_NUMPY = os.environ.get("BERRYMOMENTS_PURE_NUMPY", "").strip().lower() in _TRUTHY

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not PURE_NUMPY


def njit(func):
    """Compile ``func`` with ``numba.njit(cache=True)`` when numba is present.

    Numba-compiled variants are always built when numba is importable, so the
    benchmark can time both paths in one process. Which one the library calls
    is decided separately by :data:`USE_NUMBA`.
    """
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
