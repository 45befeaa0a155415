"""Numba switch.

Set ``WEYLKIT_DISABLE_NUMBA=1`` before import to run every kernel on its
pure-numpy path. Without numba installed the numpy path is used as well.
"""

import os

_DISABLED = os.environ.get("WEYLKIT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when numba is present, identity otherwise.

    The decorated function is always compiled when numba is importable, even
    if the numpy path is selected, so both paths stay testable side by side.
    """
    kwargs.setdefault("cache", True)

    def wrap(func):
        if not HAVE_NUMBA:
            return func
        return numba.njit(**kwargs)(func)

    if len(args) == 1 and callable(args[0]):
        return wrap(args[0])
    return wrap
