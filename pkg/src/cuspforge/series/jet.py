"""Truncated power series in one (``Jet1``) and two (``Jet2``) variables.

Coefficients are stored densely.  ``Jet1`` holds ``c[0..N]`` and every stored
coefficient is exact.  ``Jet2`` holds a rectangle ``c[i, j]`` (``i <= u_order``,
``j <= v_order``) plus a certified total degree ``degree``: coefficients with
``i + j <= degree`` are exact, the rest of the rectangle is scratch that the
arithmetic carries along but never vouches for.
"""
from __future__ import annotations

import numbers

import numpy as np

from .. import errors
from . import _backend

UNIT_TOL = 1e-9
DIV_TOL = 1e-9


def _coerce_array(coeffs, ndim):
    arr = np.array(coeffs)
    if arr.dtype != object:
        arr = arr.astype(np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d coefficient array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty coefficient array")
    return arr


def _is_scalar(x):
    return isinstance(x, numbers.Number) or (np.ndim(x) == 0 and not isinstance(x, (Jet1, Jet2)))


def _max_abs(arr):
    if arr.size == 0:
        return 0.0
    return max(abs(x) for x in arr.ravel()) if arr.dtype == object else float(np.max(np.abs(arr)))


class Jet1:
    """Univariate truncated series ``sum c[k] t**k`` for ``k <= order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = _coerce_array(coeffs, 1)
        arr.flags.writeable = False
        self.coeffs = arr

    # -- construction -------------------------------------------------
    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1, dtype=object if not isinstance(value, (float, int)) else np.float64)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, order):
        c = np.zeros(order + 1)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    def __repr__(self):
        return f"Jet1(order={self.order}, coeffs={np.array2string(np.asarray(self.coeffs), precision=6)})"

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncate(self, order):
        if order < 0:
            raise errors.ZeroBudget("cannot truncate below order 0")
        return Jet1(self.coeffs[: order + 1])

    def pad(self, order):
        """Zero-extend; only meaningful when the series is known to be a polynomial."""
        if order <= self.order:
            return self.truncate(order)
        c = np.zeros(order + 1, dtype=self.coeffs.dtype)
        c[: self.order + 1] = self.coeffs
        return Jet1(c)

    # -- arithmetic ---------------------------------------------------
    def _pair(self, other):
        n = min(self.order, other.order)
        return self.coeffs[: n + 1], other.coeffs[: n + 1]

    def __add__(self, other):
        if isinstance(other, Jet1):
            a, b = self._pair(other)
            return Jet1(a + b)
        if _is_scalar(other):
            c = self.coeffs.copy()
            c[0] = c[0] + other
            return Jet1(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, Jet1):
            a, b = self._pair(other)
            return Jet1(a - b)
        if _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet1):
            return Jet1(_backend.mul2(self.coeffs[:, None], other.coeffs[:, None])[:, 0])
        if _is_scalar(other):
            return Jet1(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet1):
            return self.div_unit(other)
        if _is_scalar(other):
            return Jet1(self.coeffs / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return Jet1.constant(other, self.order).div_unit(self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet1.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def div_unit(self, other, unit_tol=UNIT_TOL):
        if abs(other.coeffs[0]) <= unit_tol:
            raise errors.NonUnitDivisor(f"divisor constant term {other.coeffs[0]!r} is not a unit")
        return Jet1(_backend.div2(self.coeffs[:, None], other.coeffs[:, None])[:, 0])

    def sqrt(self, unit_tol=UNIT_TOL):
        if not self.coeffs[0] > unit_tol:
            raise errors.NonPositiveConstantTerm(f"constant term {self.coeffs[0]!r} is not positive")
        return Jet1(_backend.sqrt2(self.coeffs[:, None])[:, 0])

    # -- calculus -----------------------------------------------------
    def derive(self):
        if self.order == 0:
            raise errors.ZeroBudget("derivative of an order-0 jet")
        k = np.arange(1, self.order + 1)
        return Jet1(self.coeffs[1:] * k)

    def integrate(self, constant=0.0):
        c = np.zeros(self.order + 2, dtype=self.coeffs.dtype)
        c[0] = constant
        c[1:] = self.coeffs / np.arange(1, self.order + 2)
        return Jet1(c)

    def compose(self, inner, tol=UNIT_TOL):
        """``self(inner(t))`` for an inner series without constant term."""
        if abs(inner.coeffs[0]) > tol:
            raise errors.NonVanishingConstant("inner series must vanish at 0")
        n = min(self.order, inner.order)
        inner = Jet1(np.concatenate([[0.0 * inner.coeffs[0]], inner.coeffs[1 : n + 1]]))
        out = Jet1.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            out = out * inner + self.coeffs[k]
        return out

    def reversion(self, tol=UNIT_TOL):
        """Compositional inverse of a series with ``c[0] = 0`` and ``c[1] != 0``."""
        if abs(self.coeffs[0]) > tol:
            raise errors.NonVanishingConstant("series must vanish at 0 to be inverted")
        if self.order < 1 or abs(self.coeffs[1]) <= tol:
            raise errors.NonUnitDivisor("series has no invertible linear term")
        lead = self.coeffs[1]
        t = Jet1.variable(self.order)
        rest = self - t * lead
        w = t / lead
        for _ in range(self.order):
            w = (t - rest.compose(w)) / lead
        return w

    def __call__(self, t):
        t = np.asarray(t)
        out = np.zeros_like(t, dtype=float) + self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            out = out * t + c
        return out

    def embed_u(self, v_order=0):
        """View as a function of ``u`` alone on a ``(order, v_order)`` rectangle."""
        c = np.zeros((self.order + 1, v_order + 1), dtype=self.coeffs.dtype)
        c[:, 0] = self.coeffs
        return Jet2(c, degree=self.order)

    def max_abs(self):
        return _max_abs(self.coeffs)


def _fit(coeffs, degree, u_order, v_order):
    """Reshape onto a new rectangle; padding costs certification."""
    old_u, old_v = coeffs.shape[0] - 1, coeffs.shape[1] - 1
    out = np.zeros((u_order + 1, v_order + 1), dtype=coeffs.dtype)
    nu, nv = min(old_u, u_order), min(old_v, v_order)
    out[: nu + 1, : nv + 1] = coeffs[: nu + 1, : nv + 1]
    d = min(degree, u_order + v_order)
    if u_order > old_u:
        d = min(d, old_u)
    if v_order > old_v:
        d = min(d, old_v)
    return out, d


class Jet2:
    """Bivariate truncated series in ``(u, v)`` with a certified total degree."""

    __slots__ = ("coeffs", "degree")

    def __init__(self, coeffs, degree=None):
        arr = _coerce_array(coeffs, 2)
        arr.flags.writeable = False
        self.coeffs = arr
        full = arr.shape[0] + arr.shape[1] - 2
        self.degree = full if degree is None else min(int(degree), full)
        if self.degree < 0:
            raise errors.ZeroBudget("negative certified degree")

    @classmethod
    def zeros(cls, u_order, v_order, degree=None):
        return cls(np.zeros((u_order + 1, v_order + 1)), degree)

    @classmethod
    def constant(cls, value, u_order, v_order, degree=None):
        c = np.zeros((u_order + 1, v_order + 1))
        c[0, 0] = value
        return cls(c, degree)

    @classmethod
    def u(cls, u_order, v_order):
        c = np.zeros((u_order + 1, v_order + 1))
        if u_order >= 1:
            c[1, 0] = 1.0
        return cls(c)

    @classmethod
    def v(cls, u_order, v_order):
        c = np.zeros((u_order + 1, v_order + 1))
        if v_order >= 1:
            c[0, 1] = 1.0
        return cls(c)

    @classmethod
    def from_dict(cls, terms, u_order, v_order, degree=None):
        """Build from ``{(i, j): coefficient}``; terms outside the rectangle are dropped."""
        c = np.zeros((u_order + 1, v_order + 1))
        for (i, j), value in terms.items():
            if i <= u_order and j <= v_order:
                c[i, j] = value
        return cls(c, degree)

    @classmethod
    def from_columns(cls, columns, u_order):
        """Assemble ``sum_j columns[j](u) v**j``; certification is the weakest column."""
        v_order = len(columns) - 1
        dtype = object if any(col.coeffs.dtype == object for col in columns) else np.float64
        c = np.zeros((u_order + 1, v_order + 1), dtype=dtype)
        degree = u_order + v_order
        for j, col in enumerate(columns):
            n = min(col.order, u_order)
            c[: n + 1, j] = col.coeffs[: n + 1]
            degree = min(degree, col.order + j)
        return cls(c, degree)

    @property
    def u_order(self):
        return self.coeffs.shape[0] - 1

    @property
    def v_order(self):
        return self.coeffs.shape[1] - 1

    @property
    def shape(self):
        return self.coeffs.shape

    def __repr__(self):
        return f"Jet2(u_order={self.u_order}, v_order={self.v_order}, degree={self.degree})"

    def certified_mask(self, degree=None):
        d = self.degree if degree is None else min(degree, self.degree)
        i, j = np.indices(self.coeffs.shape)
        return (i + j) <= d

    def certified(self, degree=None):
        """Coefficient array with uncertified entries zeroed."""
        c = self.coeffs.copy()
        c[~self.certified_mask(degree)] = 0
        return c

    def max_abs(self, degree=None):
        return _max_abs(self.coeffs[self.certified_mask(degree)])

    def fit(self, u_order, v_order):
        arr, d = _fit(self.coeffs, self.degree, u_order, v_order)
        return Jet2(arr, d)

    def truncate(self, u_order=None, v_order=None, degree=None):
        u_order = self.u_order if u_order is None else min(u_order, self.u_order)
        v_order = self.v_order if v_order is None else min(v_order, self.v_order)
        d = self.degree if degree is None else min(degree, self.degree)
        return Jet2(self.coeffs[: u_order + 1, : v_order + 1], d)

    def with_degree(self, degree):
        return Jet2(self.coeffs, min(degree, self.degree))

    # -- arithmetic ---------------------------------------------------
    def _other(self, other):
        if isinstance(other, Jet2):
            return other
        if isinstance(other, Jet1):
            return other.embed_u(self.v_order)
        return None

    def _pair(self, other):
        nu = min(self.u_order, other.u_order)
        nv = min(self.v_order, other.v_order)
        d = min(self.degree, other.degree)
        return self.coeffs[: nu + 1, : nv + 1], other.coeffs[: nu + 1, : nv + 1], d

    def __add__(self, other):
        o = self._other(other)
        if o is not None:
            a, b, d = self._pair(o)
            return Jet2(a + b, d)
        if _is_scalar(other):
            c = self.coeffs.copy()
            c[0, 0] = c[0, 0] + other
            return Jet2(c, self.degree)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeffs, self.degree)

    def __sub__(self, other):
        o = self._other(other)
        if o is not None:
            a, b, d = self._pair(o)
            return Jet2(a - b, d)
        if _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is not None:
            a, b, d = self._pair(o)
            return Jet2(_backend.mul2(a, b), d)
        if _is_scalar(other):
            return Jet2(self.coeffs * other, self.degree)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is not None:
            return self.div_unit(o)
        if _is_scalar(other):
            return Jet2(self.coeffs / other, self.degree)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return Jet2.constant(other, self.u_order, self.v_order).div_unit(self)
        return NotImplemented

    def div_unit(self, other, unit_tol=UNIT_TOL):
        o = self._other(other)
        if abs(o.coeffs[0, 0]) <= unit_tol:
            raise errors.NonUnitDivisor(f"divisor constant term {o.coeffs[0, 0]!r} is not a unit")
        a, b, d = self._pair(o)
        return Jet2(_backend.div2(a, b), d)

    def sqrt(self, unit_tol=UNIT_TOL):
        if not self.coeffs[0, 0] > unit_tol:
            raise errors.NonPositiveConstantTerm(f"constant term {self.coeffs[0, 0]!r} is not positive")
        return Jet2(_backend.sqrt2(self.coeffs), self.degree)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet2.constant(1.0, self.u_order, self.v_order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus -----------------------------------------------------
    def du(self):
        if self.degree == 0 or self.u_order == 0:
            raise errors.ZeroBudget("no u-budget left for a derivative")
        k = np.arange(1, self.u_order + 1)[:, None]
        return Jet2(self.coeffs[1:] * k, self.degree - 1)

    def dv(self):
        if self.degree == 0 or self.v_order == 0:
            raise errors.ZeroBudget("no v-budget left for a derivative")
        k = np.arange(1, self.v_order + 1)[None, :]
        return Jet2(self.coeffs[:, 1:] * k, self.degree - 1)

    def derive(self, var):
        if var == "u":
            return self.du()
        if var == "v":
            return self.dv()
        raise ValueError(f"unknown variable {var!r}")

    def div_v(self, div_tol=DIV_TOL):
        """Exact quotient by ``v``; the v**0 slice must vanish."""
        if self.v_order == 0 or self.degree == 0:
            raise errors.ZeroBudget("no v-budget left for division by v")
        scale = self.max_abs()
        col = self.coeffs[: min(self.u_order, self.degree) + 1, 0]
        bad = _max_abs(col)
        if bad > div_tol * max(scale, 1.0):
            raise errors.NotDivisible(f"v**0 coefficient of size {bad:.3g} exceeds tolerance")
        return Jet2(self.coeffs[:, 1:], self.degree - 1)

    def mul_v(self):
        c = np.zeros((self.u_order + 1, self.v_order + 2), dtype=self.coeffs.dtype)
        c[:, 1:] = self.coeffs
        return Jet2(c, self.degree + 1)

    def restrict_v0(self):
        n = min(self.u_order, self.degree)
        return Jet1(self.coeffs[: n + 1, 0])

    def column(self, j):
        """Certified part of the coefficient of ``v**j`` as a series in ``u``."""
        n = min(self.u_order, self.degree - j)
        if j > self.v_order or n < 0:
            raise errors.ZeroBudget(f"v**{j} coefficient is not certified")
        return Jet1(self.coeffs[: n + 1, j])

    # -- substitution -------------------------------------------------
    def compose(self, xi, eta, tol=UNIT_TOL):
        """``self(xi(u, v), eta(u, v))`` on this jet's rectangle."""
        xi = xi.embed_u(self.v_order) if isinstance(xi, Jet1) else xi
        eta = eta.embed_u(self.v_order) if isinstance(eta, Jet1) else eta
        if abs(xi.coeffs[0, 0]) > tol or abs(eta.coeffs[0, 0]) > tol:
            raise errors.NonVanishingConstant("substitution must fix the origin")
        nu, nv = self.u_order, self.v_order
        xi = xi.fit(nu, nv)
        eta = eta.fit(nu, nv)
        d = min(self.degree, xi.degree, eta.degree)
        if _max_abs(eta.coeffs[:, 0]) > tol:
            d = min(d, nv)
        if _max_abs(xi.coeffs[0, :]) > tol:
            d = min(d, nu)
        # Horner in eta for each u-power, then in xi.
        a = self.coeffs
        result = None
        for i in range(nu, -1, -1):
            inner = Jet2(np.zeros_like(a), None) + a[i, nv]
            for j in range(nv - 1, -1, -1):
                inner = inner * eta + a[i, j]
            result = inner if result is None else result * xi + inner
        return Jet2(result.coeffs, d)

    def scale_v(self, s, tol=UNIT_TOL):
        """``self(u, s(u) * v)`` for a univariate scale factor ``s``."""
        nu = self.u_order
        s_arr = s.pad(nu).coeffs[:, None]
        # a_{k,j} s^j only reaches total degree >= j + (index into s), so the
        # first non-vanishing v-column bounds how much of s is consumed
        scale = max(self.max_abs(), 1.0)
        j_min = None
        for j in range(1, min(self.v_order, self.degree) + 1):
            if _max_abs(self.column(j).coeffs) > tol * scale:
                j_min = j
                break
        power = np.zeros((nu + 1, 1), dtype=s_arr.dtype)
        power[0, 0] = 1.0
        cols = [self.coeffs[:, 0]]
        for j in range(1, self.v_order + 1):
            power = _backend.mul2(power, s_arr)
            cols.append(_backend.mul2(self.coeffs[:, j : j + 1], power)[:, 0])
        d = self.degree if j_min is None else min(self.degree, s.order + j_min)
        return Jet2(np.stack(cols, axis=1), d)

    def flip_u(self):
        """``self(-u, v)``; exact."""
        sign = (-1.0) ** np.arange(self.u_order + 1)[:, None]
        return Jet2(self.coeffs * sign, self.degree)

    # -- evaluation ---------------------------------------------------
    def __call__(self, u, v):
        """Evaluate the certified polynomial part at points ``(u, v)``."""
        c = self.certified().astype(float)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.zeros(np.broadcast(u, v).shape)
        for i in range(self.u_order, -1, -1):
            row = np.zeros_like(out) + c[i, -1]
            for j in range(self.v_order - 1, -1, -1):
                row = row * v + c[i, j]
            out = out * u + row
        return out

    def homogeneous_part(self, degree):
        c = np.zeros(self.coeffs.shape, dtype=self.coeffs.dtype)
        i, j = np.indices(self.coeffs.shape)
        mask = (i + j) == degree
        c[mask] = self.coeffs[mask]
        return Jet2(c, self.degree)


def max_diff(a, b, degree=None):
    """Largest coefficient difference on monomials certified in both jets."""
    if isinstance(a, Jet1) and isinstance(b, Jet1):
        n = min(a.order, b.order) if degree is None else min(a.order, b.order, degree)
        return _max_abs(a.coeffs[: n + 1] - b.coeffs[: n + 1])
    diff = a - b
    return diff.max_abs(degree)
