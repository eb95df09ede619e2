"""Optional numba acceleration.

Set ``SURROGATE_MIX_DISABLE_NUMBA=1`` to run every kernel as plain Python
(scalar kernels) or vectorized numpy (array kernels). The flag is read once at
import time.
"""
import os

_FLAG = os.environ.get("SURROGATE_MIX_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no", "off")

try:
    if DISABLED:
        raise ImportError
    import numba as _numba
except ImportError:
    _numba = None

ENABLED = _numba is not None


def njit(fn):
    """Compile ``fn`` in nopython mode when numba is active, else return it."""
    if not ENABLED:
        return fn
    return _numba.njit(cache=True, nogil=True)(fn)


def backend() -> str:
    return "numba" if ENABLED else "numpy"
