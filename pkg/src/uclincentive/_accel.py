"""Optional numba acceleration.

Set ``UCLINCENTIVE_DISABLE_NUMBA=1`` to force the vectorised numpy path even
when numba is installed. The two paths produce bit-identical results.
"""

import os

_DISABLED = os.environ.get("UCLINCENTIVE_DISABLE_NUMBA", "").strip().lower() not in (
    "",
    "0",
    "false",
    "no",
)

try:
    if _DISABLED:
        raise ImportError("numba disabled by UCLINCENTIVE_DISABLE_NUMBA")
    from numba import get_num_threads, njit, prange, set_num_threads

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator

    prange = range

    def set_num_threads(n):
        pass

    def get_num_threads():
        return 1


def default_backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    return backend
