"""Select the kernel-assembly backend at import time.

The compiled extension is preferred; setting ``REDSBO_PURE_PYTHON=1`` forces
the numpy fallback.
"""
import importlib
import os

from redsbo import _pykernels

_ENV_FLAG = "REDSBO_PURE_PYTHON"


def load_backend(name):
    """Return the backend module called ``name`` ("cython" or "python")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("redsbo._ckernels")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    if os.environ.get(_ENV_FLAG, "").strip() not in ("", "0"):
        return "python", _pykernels
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", _pykernels


BACKEND, impl = _select()


def available_backends():
    names = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        return names
    return ["cython"] + names
