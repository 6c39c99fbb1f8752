"""Kernel backend selection.

The compiled extension is used when it imported cleanly and the operands are
float64; anything else (object arrays, a missing build, ``CFORGE_PURE=1``)
goes through the numpy fallback.
"""
import os
from types import SimpleNamespace

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # no build available
    _compiled = None

AVAILABLE = ("compiled", "python") if _compiled is not None else ("python",)

_state = SimpleNamespace(name="python")


def set_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    if name not in AVAILABLE:
        raise ValueError(f"backend {name!r} not available (have {AVAILABLE})")
    previous = _state.name
    _state.name = name
    return previous


def get_backend():
    return _state.name


if _compiled is not None and os.environ.get("CFORGE_PURE", "") in ("", "0"):
    _state.name = "compiled"


def _fast(*arrays):
    return _state.name == "compiled" and all(x.dtype == np.float64 for x in arrays)


def mul2(a, b):
    if _fast(a, b):
        return _compiled.mul2(a, b)
    return _kernels_py.mul2(a, b)


def div2(a, b):
    if _fast(a, b):
        return _compiled.div2(a, b)
    return _kernels_py.div2(a, b)


def sqrt2(a):
    if _fast(a):
        return _compiled.sqrt2(a)
    return _kernels_py.sqrt2(a)


scalar_sqrt = _kernels_py.scalar_sqrt
