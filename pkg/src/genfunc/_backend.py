"""Kernel backend selection.

Set ``GENFUNC_BACKEND=numpy`` to bypass numba entirely and run the
vectorised numpy kernels. Any other value (default ``numba``) jit-compiles
the loop kernels when numba is importable.
"""
import os

BACKEND_ENV = "GENFUNC_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()

numba = None
if _requested != "numpy":
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _requested != "numpy"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
