"""Selection between the numba-compiled kernels and the pure-numpy fallback.

The default is numba when it imports cleanly. Setting ``MAXVOL_DISABLE_JIT=1``
in the environment before import selects the numpy path; ``set_backend`` can
switch at runtime (the benchmark and the test-suite use it to compare paths).
"""

import os
from contextlib import contextmanager

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")

_env_off = os.environ.get("MAXVOL_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes", "on")
_current = "numba" if (HAVE_NUMBA and not _env_off) else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or an identity decorator without numba."""
    kwargs.setdefault("cache", True)
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


def get_backend():
    return _current


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _current
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable in this environment")
    prev, _current = _current, name
    return prev


@contextmanager
def use_backend(name):
    prev = set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)
