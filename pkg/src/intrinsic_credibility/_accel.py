"""Optional numba acceleration.

Kernels are compiled with ``numba.njit`` when numba is importable and
``INCRED_DISABLE_NUMBA`` is unset (or ``0``/``false``).  With the flag set the
same kernels run as plain Python, and the array entry points switch to the
pure-numpy implementations.  The flag is read once, at import time.
"""

import os

_FLAG = os.environ.get("INCRED_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not _DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when acceleration is on, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
