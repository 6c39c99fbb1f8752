"""Three-vectors and 3x3 matrices with jet entries (``Jet1`` or ``Jet2``)."""
from __future__ import annotations

import numpy as np

from .. import errors
from .jet import UNIT_TOL, Jet1, Jet2, max_diff


class JetVec3:
    __slots__ = ("c",)

    def __init__(self, components):
        c = tuple(components)
        if len(c) != 3:
            raise ValueError("a JetVec3 needs exactly three components")
        self.c = c

    @classmethod
    def from_array(cls, arr, degree=None):
        """Stack of shape ``(3, n)`` -> Jet1 entries, ``(3, nu, nv)`` -> Jet2 entries."""
        arr = np.asarray(arr)
        if arr.ndim == 2:
            return cls(Jet1(row) for row in arr)
        return cls(Jet2(block, degree) for block in arr)

    @classmethod
    def constant(cls, vec, like):
        return cls(like * 0.0 + float(x) for x in vec)

    def __iter__(self):
        return iter(self.c)

    def __getitem__(self, k):
        return self.c[k]

    def __repr__(self):
        return f"JetVec3({self.c[0]!r}, ...)"

    def map(self, fn):
        return JetVec3(fn(x) for x in self.c)

    def __add__(self, other):
        if isinstance(other, JetVec3):
            return JetVec3(a + b for a, b in zip(self.c, other.c))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, JetVec3):
            return JetVec3(a - b for a, b in zip(self.c, other.c))
        return NotImplemented

    def __neg__(self):
        return JetVec3(-a for a in self.c)

    def __mul__(self, s):
        """Scale by a number or a scalar jet."""
        return JetVec3(a * s for a in self.c)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return JetVec3(a / s for a in self.c)

    def dot(self, other):
        a, b = self.c, other.c
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]

    def norm2(self):
        return self.dot(self)

    def cross(self, other):
        a, b = self.c, other.c
        return JetVec3(
            (
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            )
        )

    def du(self):
        return self.map(lambda x: x.du())

    def dv(self):
        return self.map(lambda x: x.dv())

    def derive(self, var=None):
        if var is None:
            return self.map(lambda x: x.derive())
        return self.map(lambda x: x.derive(var))

    def div_v(self, **kw):
        return self.map(lambda x: x.div_v(**kw))

    def restrict_v0(self):
        return self.map(lambda x: x.restrict_v0())

    def at0(self):
        """Constant terms as a float array."""
        return np.array([float(x.coeffs.flat[0]) for x in self.c])

    def truncate(self, *args, **kw):
        return self.map(lambda x: x.truncate(*args, **kw))

    def compose(self, xi, eta):
        return self.map(lambda x: x.compose(xi, eta))

    @property
    def degree(self):
        if isinstance(self.c[0], Jet2):
            return min(x.degree for x in self.c)
        return min(x.order for x in self.c)

    def max_abs(self, *args):
        return max(x.max_abs(*args) for x in self.c)

    def stack(self):
        """Coefficient arrays stacked along a leading axis of length 3."""
        shape = tuple(min(s) for s in zip(*(x.coeffs.shape for x in self.c)))
        idx = tuple(slice(0, n) for n in shape)
        return np.stack([x.coeffs[idx] for x in self.c])


def det3(a, b, c):
    return a.dot(b.cross(c))


def vec_max_diff(a, b, degree=None):
    return max(max_diff(x, y, degree) for x, y in zip(a, b))


class JetMat3:
    """Matrix given by its three rows."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(r if isinstance(r, JetVec3) else JetVec3(r) for r in rows)
        if len(rows) != 3:
            raise ValueError("a JetMat3 needs exactly three rows")
        self.rows = rows

    @classmethod
    def identity(cls, like):
        one = like * 0.0 + 1.0
        zero = like * 0.0
        return cls(
            [
                (one, zero, zero),
                (zero, one, zero),
                (zero, zero, one),
            ]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def det(self):
        return det3(*self.rows)

    def transpose(self):
        return JetMat3([JetVec3(r[j] for r in self.rows) for j in range(3)])

    def inverse(self, unit_tol=UNIT_TOL):
        """Adjugate divided by the (unit) determinant."""
        r0, r1, r2 = self.rows
        det = self.det()
        if abs(det.coeffs.flat[0]) <= unit_tol:
            raise errors.SingularAtOrigin(f"determinant {det.coeffs.flat[0]!r} vanishes at the origin")
        inv_det = 1.0 / det
        # columns of the inverse are the cross products of row pairs
        cols = (r1.cross(r2), r2.cross(r0), r0.cross(r1))
        return JetMat3([JetVec3(cols[j][i] * inv_det for j in range(3)) for i in range(3)])

    def matvec(self, x):
        return JetVec3(r.dot(x) for r in self.rows)

    def matmul(self, other):
        cols = other.transpose().rows
        return JetMat3([JetVec3(r.dot(c) for c in cols) for r in self.rows])

    def map(self, fn):
        return JetMat3([r.map(fn) for r in self.rows])
