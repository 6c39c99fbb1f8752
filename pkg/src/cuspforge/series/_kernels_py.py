"""Pure-numpy truncated series kernels.

Arrays hold coefficients ``c[i, j]`` of ``u**i * v**j``.  Every kernel
truncates to the common rectangle of its inputs.  These routines also accept
``dtype=object`` arrays (e.g. ``mpmath.mpf`` entries), which the compiled
kernels do not.
"""
import math

import numpy as np


def scalar_sqrt(x):
    if isinstance(x, (float, int, np.floating, np.integer)):
        return math.sqrt(x)
    if hasattr(x, "sqrt"):
        return x.sqrt()
    return x ** 0.5


def _common(a, b):
    nu = min(a.shape[0], b.shape[0])
    nv = min(a.shape[1], b.shape[1])
    return a[:nu, :nv], b[:nu, :nv], nu, nv


def mul2(a, b):
    a, b, nu, nv = _common(a, b)
    out = np.zeros((nu, nv), dtype=np.result_type(a, b))
    for i in range(nu):
        row = a[i]
        if not row.any():
            continue
        for k in range(nu - i):
            out[i + k] += np.convolve(row, b[k])[:nv]
    return out


def div2(a, b):
    a, b, nu, nv = _common(a, b)
    q = np.zeros((nu, nv), dtype=np.result_type(a, b))
    b00 = b[0, 0]
    for i in range(nu):
        for j in range(nv):
            # q[i, j] is still zero here, so the b00 term drops out of the sum
            acc = np.sum(b[: i + 1, : j + 1] * q[i::-1, j::-1])
            q[i, j] = (a[i, j] - acc) / b00
    return q


def sqrt2(a):
    nu, nv = a.shape
    s = np.zeros((nu, nv), dtype=a.dtype)
    s00 = scalar_sqrt(a[0, 0])
    s[0, 0] = s00
    two_s00 = 2 * s00
    for i in range(nu):
        for j in range(nv):
            if i == 0 and j == 0:
                continue
            acc = np.sum(s[: i + 1, : j + 1] * s[i::-1, j::-1])
            s[i, j] = (a[i, j] - acc) / two_s00
    return s
