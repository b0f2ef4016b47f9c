"""Backend selection for the compiled kernels.

Set ``DUNKLRAD_DISABLE_NUMBA=1`` before import to force the pure-numpy
kernels even when numba is installed.
"""

import os

_DISABLED = os.environ.get("DUNKLRAD_DISABLE_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled by DUNKLRAD_DISABLE_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return decorator


def numba_installed():
    """True if numba can be imported, regardless of the env flag."""
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True
