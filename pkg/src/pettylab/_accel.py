"""Switch between numba-compiled kernels and the pure-numpy fallback.

``PETTYLAB_NUMBA=0`` (or ``off``/``false``/``no``) selects numpy even when
numba is importable.  ``PETTYLAB_THREADS`` sets the kernel thread count; it
is the only environment knob besides the switch itself.
"""
import os

_OFF = {"0", "off", "false", "no"}


def _want_numba():
    return os.environ.get("PETTYLAB_NUMBA", "1").strip().lower() not in _OFF


try:
    import numba as nb
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and _want_numba()

_threads = os.environ.get("PETTYLAB_THREADS")
THREADS = int(_threads) if _threads else (os.cpu_count() or 1)
PARALLEL = USE_NUMBA and THREADS > 1
if PARALLEL:
    nb.set_num_threads(min(THREADS, nb.config.NUMBA_NUM_THREADS))


def njit(func=None, *, parallel=False):
    """``numba.njit`` with on-disk caching, or the identity when disabled."""
    def wrap(f):
        if not USE_NUMBA:
            return f
        return nb.njit(cache=True, parallel=parallel and PARALLEL)(f)
    return wrap(func) if func is not None else wrap


if USE_NUMBA:
    prange = nb.prange
else:
    prange = range


def backend():
    return "numba" if USE_NUMBA else "numpy"
