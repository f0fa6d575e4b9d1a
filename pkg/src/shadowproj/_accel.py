"""Select between numba-compiled kernels and the pure-numpy fallback.

Set ``SHADOWPROJ_DISABLE_NUMBA=1`` before import to force the numpy path.
If numba is not installed the numpy path is used regardless.
"""
import os

_FLAG = os.environ.get("SHADOWPROJ_DISABLE_NUMBA", "").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is optional
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or a no-op decorator without numba."""
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)


def backend():
    return "numba" if USE_NUMBA else "numpy"
