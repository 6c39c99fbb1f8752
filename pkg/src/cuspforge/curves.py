"""Space curves as triples of univariate jets.

Frenet apparatus, the coefficient recursion for the Frenet ODE (curve from
curvature and torsion), arclength reparametrization, and the initial normal
fields ``X+`` / ``X-`` that seed the Cauchy problem.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import errors
from .series import Jet1, JetVec3, UNIT_TOL, det3

PLUS = "plus"
MINUS = "minus"


def parse_branch(branch):
    b = str(branch).strip().lower()
    if b in ("+", "plus", "p", "+1", "1"):
        return PLUS
    if b in ("-", "−", "minus", "m", "-1"):
        return MINUS
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class SpaceCurveJet:
    vec: JetVec3
    arclength_certified: bool = False

    @classmethod
    def from_array(cls, arr, arclength_certified=False):
        return cls(JetVec3.from_array(np.asarray(arr)), arclength_certified)

    @classmethod
    def from_polynomial(cls, coeffs, order):
        """Exact polynomial curve from per-degree points ``coeffs[k] = (x_k, y_k, z_k)``."""
        arr = np.zeros((3, order + 1))
        for k, row in enumerate(np.asarray(coeffs, dtype=float)[: order + 1]):
            arr[:, k] = row
        return cls.from_array(arr)

    @property
    def x(self):
        return self.vec[0]

    @property
    def y(self):
        return self.vec[1]

    @property
    def z(self):
        return self.vec[2]

    @property
    def order(self):
        return self.vec.degree

    def array(self):
        return self.vec.stack()

    def derive(self):
        return self.vec.derive()

    def truncate(self, order):
        return SpaceCurveJet(self.vec.truncate(order), self.arclength_certified)

    def __call__(self, t):
        return np.stack([c(t) for c in self.vec])

    def speed_defect(self):
        """Largest coefficient of ``|c'|^2 - 1``."""
        d1 = self.derive()
        return (d1.norm2() - 1.0).max_abs()


@dataclass(frozen=True)
class FrenetData:
    e: JetVec3
    n: JetVec3
    b: JetVec3
    kappa: Jet1
    tau: Jet1 | None

    def frame_at0(self):
        return np.stack([self.e.at0(), self.n.at0(), self.b.at0()])


@dataclass(frozen=True)
class NormalField:
    w: JetVec3
    branch: str
    mu: Jet1


def _vec(c):
    return c.vec if isinstance(c, SpaceCurveJet) else c


def frenet_apparatus(c, tol=UNIT_TOL):
    """Curvature, torsion and Frenet frame of a regular curve in any parametrization."""
    c = _vec(c)
    d1 = c.derive()
    d2 = d1.derive()
    speed2 = d1.norm2()
    if not speed2[0] > tol**2:
        raise errors.DegenerateCurve("curve has vanishing speed at t=0")
    cr = d1.cross(d2)
    cr2 = cr.norm2()
    if not cr2[0] > tol**2:
        raise errors.DegenerateCurve("curve has vanishing curvature at t=0")
    speed = speed2.sqrt()
    cr_len = cr2.sqrt()
    kappa = cr_len / (speed2 * speed)
    tau = None
    if d2.degree >= 1:
        tau = det3(d1, d2, d2.derive()) / cr2
    e = d1 / speed
    b = cr / cr_len
    n = b.cross(e)
    return FrenetData(e=e, n=n, b=b, kappa=kappa, tau=tau)


def _check_frame(frame, tol=1e-9):
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (3, 3):
        raise errors.NonOrthonormalFrame("frame must be three 3-vectors")
    if np.max(np.abs(frame @ frame.T - np.eye(3))) > tol:
        raise errors.NonOrthonormalFrame("frame vectors are not orthonormal")
    if np.linalg.det(frame) < 0:
        raise errors.NonOrthonormalFrame("frame is negatively oriented")
    return frame


def curve_from_curvature_torsion(kappa, tau, frame0=None, p0=None, order=None):
    """Arclength curve with prescribed curvature and torsion.

    Solves ``e' = k n, n' = -k e + t b, b' = -t n, c' = e`` by matching
    Taylor coefficients.  ``frame0`` holds the rows ``(e, n, b)`` at ``t = 0``.
    """
    if not kappa[0] > 0:
        raise errors.DegenerateCurve("curvature must be positive at t=0")
    frame0 = _check_frame(np.eye(3) if frame0 is None else frame0)
    p0 = np.zeros(3) if p0 is None else np.asarray(p0, dtype=float)
    k, t = np.asarray(kappa.coeffs, dtype=float), np.asarray(tau.coeffs, dtype=float)
    e, n, b = [frame0[0]], [frame0[1]], [frame0[2]]

    def conv(coef, vecs, m):
        return sum(coef[j] * vecs[m - j] for j in range(m + 1))

    m = 0
    while True:
        grew = False
        # each new coefficient may only use certified lower ones
        if m <= kappa.order and len(e) == m + 1 and len(n) > m:
            e.append(conv(k, n, m) / (m + 1))
            grew = True
        if m <= kappa.order and m <= tau.order and len(n) == m + 1 and len(e) > m and len(b) > m:
            n.append((conv(t, b, m) - conv(k, e, m)) / (m + 1))
            grew = True
        if m <= tau.order and len(b) == m + 1 and len(n) > m:
            b.append(-conv(t, n, m) / (m + 1))
            grew = True
        if not grew:
            break
        m += 1
    e_arr = np.array(e).T
    curve = np.zeros((3, e_arr.shape[1] + 1))
    curve[:, 0] = p0
    curve[:, 1:] = e_arr / np.arange(1, e_arr.shape[1] + 1)
    if order is not None:
        curve = curve[:, : order + 1]
    return SpaceCurveJet.from_array(curve, arclength_certified=True)


def arclength_reparam(c, tol=UNIT_TOL):
    """Return ``(s_inverse, unit-speed curve)`` with ``c_unit = c o s_inverse``."""
    vec = _vec(c)
    speed2 = vec.derive().norm2()
    if not speed2[0] > tol**2:
        raise errors.DegenerateCurve("curve has vanishing speed at t=0")
    s = speed2.sqrt().integrate()
    s_inv = s.reversion()
    unit = vec.map(lambda comp: comp.compose(s_inv))
    return s_inv, SpaceCurveJet(unit, arclength_certified=True)


def orthonormal_completion(a, b, mu, sign, tol=1e-9):
    """Unit ``w`` with ``w.a = 0``, ``w.b = mu`` and ``sign(det(a, b, w)) = sign``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if abs(a @ a - 1) > tol or abs(b @ b - 1) > tol or abs(a @ b) > tol:
        raise errors.NotOrthonormal("a and b must be orthonormal")
    if abs(mu) >= 1 - tol:
        raise errors.MuOutOfRange(f"|mu| = {abs(mu)} must be < 1")
    s = 1.0 if sign in (1, "+", PLUS) else -1.0
    return mu * b + s * np.sqrt(1 - mu * mu) * np.cross(a, b)


def initial_normal_field(sigma, kappa_s, branch, tol=UNIT_TOL, arclength_tol=1e-9):
    """The field ``X`` along an arclength curve used as initial data for ``psi``.

    ``X`` is the unit vector orthogonal to the tangent with ``X . sigma'' =
    kappa_s``; ``branch`` picks the sign of ``det(sigma', X, sigma'')``.
    """
    branch = parse_branch(branch)
    vec = _vec(sigma)
    d1 = vec.derive()
    if (d1.norm2() - 1.0).max_abs() > arclength_tol:
        raise errors.DegenerateCurve("initial normal field needs an arclength-parametrized curve")
    d2 = d1.derive()
    kt = d2.norm2()
    if not kt[0] > tol**2:
        raise errors.DegenerateCurve("target curve has vanishing curvature at t=0")
    kt = kt.sqrt()
    n = d2 / kt
    binormal = d1.cross(n)
    mu = kappa_s / kt
    if abs(mu[0]) >= 1 - tol:
        raise errors.CurvatureTooSmall(
            f"curvature {kt[0]:.12g} does not exceed |kappa_s| = {abs(kappa_s[0]):.12g} at t=0"
        )
    root = (1.0 - mu * mu).sqrt()
    # det(sigma', binormal, n) = -1, so the plus branch takes -binormal
    sign = -1.0 if branch == PLUS else 1.0
    w = n * mu + binormal * (root * sign)
    return NormalField(w=w, branch=branch, mu=mu)
