"""Independent reference computations (sympy, exact rationals) for the tests.

Nothing here touches cuspforge's series code: jets are converted to sympy
polynomials, the operation is redone symbolically, and the coefficients are
read back.
"""
from __future__ import annotations

import numpy as np
import sympy as sp

u, v, t, eps = sp.symbols("u v t epsilon")


def poly2(arr):
    arr = np.asarray(arr)
    return sum(sp.nsimplify(0) + sp.Float(float(arr[i, j]), 30) * u**i * v**j
               for i in range(arr.shape[0]) for j in range(arr.shape[1]) if arr[i, j] != 0)


def coeffs2(expr, nu, nv, degree):
    """Taylor coefficients of ``expr`` at the origin for ``i <= nu, j <= nv, i + j <= degree``."""
    scaled = sp.expand(sp.series(expr.subs({u: eps * u, v: eps * v}, simultaneous=True), eps, 0, degree + 1).removeO())
    out = np.zeros((nu + 1, nv + 1))
    poly = sp.Poly(scaled.subs(eps, 1), u, v)
    for (i, j), c in poly.terms():
        if i <= nu and j <= nv and i + j <= degree:
            out[i, j] = float(c)
    return out


def _truncate(p, degree):
    return sp.Poly.from_dict({m: c for m, c in p.terms() if sum(m) <= degree}, u, v, domain=p.domain)


def _unit_power_series(p, degree, coeff):
    """``sum_k coeff(k) * ((p - p0) / p0)**k`` truncated at total ``degree``; ``p`` exact."""
    p = sp.Poly(p, u, v, domain="QQ")
    p0 = p.coeff_monomial(1)
    x = _truncate((p - p0).quo_ground(p0), degree)
    term = sp.Poly(1, u, v, domain="QQ")
    total = sp.Poly(0, u, v, domain="QQ")
    for k in range(degree + 1):
        total += term.mul_ground(coeff(k))
        term = _truncate(term * x, degree)
    return total, p0


def series_inverse(p, degree):
    total, p0 = _unit_power_series(p, degree, lambda k: (-1) ** k)
    return total.quo_ground(p0)


def series_sqrt(p, degree):
    total, p0 = _unit_power_series(p, degree, lambda k: sp.binomial(sp.Rational(1, 2), k))
    return total, p0


def to_array(poly, nu, nv, degree):
    out = np.zeros((nu + 1, nv + 1))
    for (i, j), c in poly.terms():
        if i <= nu and j <= nv and i + j <= degree:
            out[i, j] = float(c)
    return out


def exact_poly2(arr):
    """Exact rational polynomial from float coefficients (every float is a rational)."""
    arr = np.asarray(arr)
    terms = {(i, j): sp.Rational(float(arr[i, j])) for i in range(arr.shape[0]) for j in range(arr.shape[1])}
    return sp.Poly.from_dict(terms, u, v, domain="QQ")


def coeffs1(expr, order, var=t):
    s = sp.series(expr, var, 0, order + 1).removeO()
    return np.array([float(s.coeff(var, k)) for k in range(order + 1)])


def example_f_sym():
    return sp.Matrix([u, -v**2 / 2 + u**3 / 6, u**2 / 2 + u**3 / 6 + v**3 / 6])


def example_g_sym():
    R = sp.Rational
    g1 = u + u**2 * v**2 / 2 - u**3 * v**2 / 2 - u * v**4 / 2 + v**5 / 30 + u**3 * v**3 / 6 + R(9, 4) * u**2 * v**4 + v**6 / 6
    g2 = (v**2 / 2 + u**3 / 6 - u**2 * v**2 + u * v**3 / 3 + 2 * u**3 * v**2 - u**2 * v**3 / 3 + u * v**4 - v**5 / 5
          - R(9, 4) * u**4 * v**2 - 6 * u**2 * v**4 + R(13, 15) * u * v**5 - R(11, 36) * v**6)
    g3 = (u**2 / 2 + u**3 / 6 - u * v**2 + v**3 / 6 + u**2 * v**2 + v**4 / 2 - u**2 * v**3 / 3 - R(5, 2) * u * v**4
          - v**5 / 15 - 2 * u**4 * v**2 + R(2, 3) * u**3 * v**3 + 6 * u**2 * v**4 + R(2, 5) * u * v**5 + R(25, 18) * v**6)
    return sp.Matrix([g1, g2, g3])


def fundamental_form_sym(F):
    fu, fv = F.diff(u), F.diff(v)
    return sp.expand(fu.dot(fu)), sp.expand(fu.dot(fv)), sp.expand(fv.dot(fv))


def frenet_sym(c):
    """Symbolic ``kappa**2`` and ``tau`` of a curve ``c(t)``."""
    d1, d2, d3 = c.diff(t), c.diff(t, 2), c.diff(t, 3)
    cr = d1.cross(d2)
    kappa2 = cr.dot(cr) / d1.dot(d1) ** 3
    tau = sp.Matrix.hstack(d1, d2, d3).det() / cr.dot(cr)
    return sp.simplify(kappa2), sp.simplify(tau)


def gamma_hat_sym():
    return example_f_sym().subs(u, t).subs(v, 0)
