"""Geometry of map germs with a cuspidal edge along the u-axis.

A germ is a ``JetVec3`` of ``Jet2`` components.  Adapted coordinates are the
chart in which, along ``v = 0``, ``|f_u| = 1``, ``f_v = 0``, ``|f_vv| = 1``
and ``f_u . f_vv = 0``; all invariants are evaluated there.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import errors
from .curves import FrenetData, SpaceCurveJet, frenet_apparatus
from .series import UNIT_TOL, Jet1, Jet2, JetVec3, det3

RAW = "raw"
SINGULAR_ON_AXIS = "singular-on-axis"
ADAPTED = "adapted"

ADAPT_TOL = 1e-8


@dataclass(frozen=True)
class MapGerm:
    vec: JetVec3
    status: str = RAW

    @classmethod
    def from_array(cls, arr, degree=None, status=RAW):
        """From coefficients of shape ``(3, u_order + 1, v_order + 1)``."""
        return cls(JetVec3.from_array(np.asarray(arr), degree), status)

    @classmethod
    def from_terms(cls, terms, u_order, v_order, degree=None, status=RAW):
        """From ``{(i, j): (x, y, z)}``."""
        arr = np.zeros((3, u_order + 1, v_order + 1))
        for (i, j), xyz in terms.items():
            if i <= u_order and j <= v_order:
                arr[:, i, j] = xyz
        return cls.from_array(arr, degree, status)

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
    def u_order(self):
        return min(c.u_order for c in self.vec)

    @property
    def v_order(self):
        return min(c.v_order for c in self.vec)

    @property
    def degree(self):
        return self.vec.degree

    def array(self):
        return self.vec.stack()

    def with_status(self, status):
        return MapGerm(self.vec, status)

    def du(self):
        return self.vec.du()

    def dv(self):
        return self.vec.dv()

    def compose(self, xi, eta, status=RAW):
        return MapGerm(self.vec.compose(xi, eta), status)

    def flip_u(self):
        return MapGerm(self.vec.map(lambda c: c.flip_u()), self.status)

    def truncate(self, degree):
        return MapGerm(self.vec.map(lambda c: c.with_degree(degree)), self.status)

    def restrict_v0(self):
        return SpaceCurveJet(self.vec.restrict_v0(), arclength_certified=self.status == ADAPTED)

    def transform(self, rot, shift=(0.0, 0.0, 0.0)):
        """Rigid motion ``x -> rot @ x + shift`` applied to the image."""
        rot = np.asarray(rot, dtype=float)
        comps = []
        for i in range(3):
            c = self.vec[0] * rot[i, 0] + self.vec[1] * rot[i, 1] + self.vec[2] * rot[i, 2]
            comps.append(c + float(shift[i]))
        return MapGerm(JetVec3(comps), self.status)

    def __call__(self, u, v):
        return np.stack([c(u, v) for c in self.vec], axis=-1)


@dataclass(frozen=True)
class FundForm:
    E: Jet2
    F: Jet2
    G: Jet2
    lam: Jet2 | None = None


@dataclass(frozen=True)
class KossowskiMetric:
    """``(1 + v^2 E0) du^2 + v^2 G0 dv^2``."""

    E0: Jet2
    G0: Jet2

    def validate(self, tol=UNIT_TOL):
        if not self.G0.coeffs[0, 0] > tol:
            raise errors.InvalidMetric("G0 must be positive at the origin")

    def fundamental_form(self):
        self.validate()
        E = self.E0.mul_v().mul_v() + 1.0
        G = self.G0.mul_v().mul_v()
        F = G * 0.0
        lam = (E * self.G0).sqrt().mul_v()
        return FundForm(E, F, G, lam)


@dataclass
class AdaptedReport:
    unit_speed: float
    singular_axis: float
    unit_phi: float
    orthogonal: float
    tol: float = ADAPT_TOL

    @property
    def ok(self):
        return max(self.unit_speed, self.singular_axis, self.unit_phi, self.orthogonal) <= self.tol

    def as_dict(self):
        return {
            "unit_speed": self.unit_speed,
            "singular_axis": self.singular_axis,
            "unit_phi": self.unit_phi,
            "orthogonal": self.orthogonal,
            "tol": self.tol,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class Adaptation:
    xi: Jet2
    eta: Jet2
    germ: MapGerm
    flipped: bool
    report: AdaptedReport


@dataclass
class EdgeInvariants:
    kappa_s: Jet1
    kappa_nu: Jet1
    kappa_c: Jet1
    kappa: Jet1 | None
    tau: Jet1 | None
    generic: bool
    cuspidal_edge: bool
    frenet: FrenetData | None = None
    nu0: np.ndarray | None = None
    conditions: dict = field(default_factory=dict)

    def product(self):
        """``kappa_c * kappa_nu`` along the edge."""
        return self.kappa_c * self.kappa_nu

    def at0(self):
        out = {
            "kappa_s": float(self.kappa_s[0]),
            "kappa_nu": float(self.kappa_nu[0]),
            "kappa_c": float(self.kappa_c[0]),
            "kappa": None if self.kappa is None else float(self.kappa[0]),
            "tau": None if self.tau is None else float(self.tau[0]),
        }
        return out


def _as_vec(f):
    return f.vec if isinstance(f, MapGerm) else f


def first_fundamental_form(f):
    vec = _as_vec(f)
    fu, fv = vec.du(), vec.dv()
    E, F, G = fu.norm2(), fu.dot(fv), fv.norm2()
    lam = None
    try:
        nu = unit_normal(f)
        lam = det3(fu, fv, nu)
    except (errors.NotDivisible, errors.DegenerateFrame, errors.ZeroBudget):
        pass
    return FundForm(E, F, G, lam)


def extract_phi(f):
    """``phi`` with ``f_v = v phi``."""
    return _as_vec(f).dv().div_v()


def unit_normal(f, tol=UNIT_TOL):
    """Unit normal ``(f_u x phi) / |f_u x phi|``, which extends across the edge."""
    vec = _as_vec(f)
    c = vec.du().cross(extract_phi(vec))
    n2 = c.norm2()
    if not n2.coeffs[0, 0] > tol**2:
        raise errors.DegenerateFrame("f_u and phi are parallel at the origin")
    return c / n2.sqrt()


def _axis_defect(jet1):
    return jet1.max_abs()


def check_adapted(f, tol=ADAPT_TOL):
    vec = _as_vec(f)
    inf = float("inf")
    try:
        fu0 = vec.du().restrict_v0()
        unit_speed = _axis_defect(fu0.norm2() - 1.0)
    except errors.ZeroBudget:
        fu0, unit_speed = None, inf
    try:
        fv = vec.dv()
        singular_axis = max(c.max_abs() for c in fv.restrict_v0())
        fvv0 = fv.dv().restrict_v0()
        unit_phi = _axis_defect(fvv0.norm2() - 1.0)
        orthogonal = inf if fu0 is None else _axis_defect(fu0.dot(fvv0))
    except errors.ZeroBudget:
        singular_axis = unit_phi = orthogonal = inf
    return AdaptedReport(unit_speed, singular_axis, unit_phi, orthogonal, tol)


def _shear(coef, power, u_order, v_order):
    """The map component ``u + coef(u) v**power``, certified to ``coef.order + power``."""
    c = np.zeros((u_order + 1, v_order + 1))
    if u_order >= 1:
        c[1, 0] = 1.0
    n = min(coef.order, u_order)
    if power <= v_order:
        c[: n + 1, power] = np.asarray(coef.coeffs[: n + 1], dtype=float)
    return Jet2(c, coef.order + power)


def _compose_maps(xi, eta, xi2, eta2):
    """``(xi, eta) o (xi2, eta2)``."""
    return xi.compose(xi2, eta2), eta.compose(xi2, eta2)


def adapt_germ(f, orient=True, tol=ADAPT_TOL):
    """Coordinate change ``(xi, eta)`` with ``f o (xi, eta)`` adapted.

    Steps: a null shear ``u -> u + e(u) v`` making ``f_v`` vanish on the axis,
    arclength along the axis, a shear ``u -> u + c(u) v^2`` making ``f_vv``
    orthogonal to ``f_u``, and a scale ``v -> a(u) v`` making ``|f_vv| = 1``.
    With ``orient`` the u-direction is reversed when needed so that the
    limiting normal curvature is positive at the origin.
    """
    vec = _as_vec(f)
    nu_, nv_ = min(c.u_order for c in vec), min(c.v_order for c in vec)
    U, V = Jet2.u(nu_, nv_), Jet2.v(nu_, nv_)
    xi, eta = U, V

    fu0 = vec.du().restrict_v0()
    speed2 = fu0.norm2()
    if not speed2[0] > UNIT_TOL:
        raise errors.DegenerateEdge("f_u vanishes at the origin")

    # (i) kill the f_u-component of f_v along the axis
    e1 = -(vec.dv().restrict_v0().dot(fu0)) / speed2
    if e1.max_abs() > 0:
        s1 = _shear(e1, 1, nu_, nv_)
        vec = vec.compose(s1, V)
        xi, eta = _compose_maps(xi, eta, s1, V)
    fv0 = vec.dv().restrict_v0()
    if max(c.max_abs() for c in fv0) > tol * max(vec.max_abs(), 1.0):
        raise errors.NotDivisible("f_v does not vanish along the axis: the singular set is not the u-axis")
    phi0 = vec.dv().dv().restrict_v0()
    fu0 = vec.du().restrict_v0()
    if not fu0.cross(phi0).norm2()[0] > UNIT_TOL:
        raise errors.DegenerateEdge("f_vv is parallel to f_u at the origin: not a cuspidal edge")

    # (ii) arclength along the axis
    s = fu0.norm2().sqrt().integrate()
    s_inv = s.reversion()
    sx = s_inv.embed_u(nv_)
    vec = vec.compose(sx, V)
    xi, eta = _compose_maps(xi, eta, sx, V)

    # (iii) make f_vv orthogonal to f_u along the axis
    fu0 = vec.du().restrict_v0()
    fvv0 = vec.dv().dv().restrict_v0()
    c2 = -(fvv0.dot(fu0)) / (fu0.norm2() * 2.0)
    if c2.max_abs() > 0:
        s3 = _shear(c2, 2, nu_, nv_)
        vec = vec.compose(s3, V)
        xi, eta = _compose_maps(xi, eta, s3, V)

    # (iv) unit f_vv along the axis
    fvv0 = vec.dv().dv().restrict_v0()
    a = 1.0 / fvv0.norm2().sqrt().sqrt()
    vec = vec.map(lambda c: c.scale_v(a))
    xi, eta = xi.scale_v(a), eta.scale_v(a)

    flipped = False
    if orient:
        fu0 = vec.du().restrict_v0()
        knu0 = det3(vec.du().du().restrict_v0(), fu0, vec.dv().dv().restrict_v0())[0]
        if knu0 < -tol:
            vec = vec.map(lambda c: c.flip_u())
            xi, eta = xi.flip_u(), eta.flip_u()
            flipped = True

    report = check_adapted(vec, tol)
    if not report.ok:
        raise errors.NotAdapted(f"adaptation did not converge: {report.as_dict()}")
    return Adaptation(xi=xi, eta=eta, germ=MapGerm(vec, ADAPTED), flipped=flipped, report=report)


def _require_adapted(f, tol):
    report = check_adapted(f, tol)
    if not report.ok:
        raise errors.NotAdapted(f"germ is not in adapted coordinates: {report.as_dict()}")


def edge_invariants(f_ad, tol=ADAPT_TOL, generic_tol=1e-8):
    """Singular, limiting normal and cuspidal curvature plus the Frenet data of the edge."""
    vec = _as_vec(f_ad)
    _require_adapted(vec, tol)
    fu = vec.du()
    phi = extract_phi(vec)
    fu0 = fu.restrict_v0()
    fuu0 = fu.du().restrict_v0()
    phi0 = phi.restrict_v0()
    fvvv0 = vec.dv().dv().dv().restrict_v0()
    kappa_nu = det3(fuu0, fu0, phi0)
    kappa_c = det3(fu0, phi0, fvvv0)
    kappa_s = phi0.dot(fuu0)
    edge = SpaceCurveJet(vec.restrict_v0(), arclength_certified=True)
    try:
        fr = frenet_apparatus(edge)
        kappa, tau = fr.kappa, fr.tau
    except errors.DegenerateCurve:
        fr, kappa, tau = None, None, None
    nu0 = unit_normal(vec).restrict_v0().at0()
    generic = abs(kappa_nu[0]) > generic_tol
    cuspidal = abs(kappa_c[0]) > generic_tol
    conditions = {
        "a_osculating_plane": bool(fr is not None and abs(float(fr.n.at0() @ nu0)) > generic_tol),
        "b_kappa_nu": bool(generic),
        "c_kappa_exceeds_kappa_s": bool(kappa is not None and kappa[0] > abs(kappa_s[0]) + generic_tol),
    }
    return EdgeInvariants(
        kappa_s=kappa_s,
        kappa_nu=kappa_nu,
        kappa_c=kappa_c,
        kappa=kappa,
        tau=tau,
        generic=bool(generic),
        cuspidal_edge=bool(cuspidal),
        frenet=fr,
        nu0=nu0,
        conditions=conditions,
    )


def cuspidal_curvature_phi(f_ad):
    """``2 det(f_u, phi, phi_v)`` on the axis; equals ``det(f_u, f_vv, f_vvv)`` there."""
    vec = _as_vec(f_ad)
    phi = extract_phi(vec)
    return det3(vec.du().restrict_v0(), phi.restrict_v0(), phi.dv().restrict_v0()) * 2.0


def kappa_s_intrinsic(m, tol=UNIT_TOL):
    """Singular curvature from ``E, F`` and the signed area density ``lam``.

    Same sign as ``phi(u, 0) . f_uu(u, 0)`` for an adapted germ whose ``lam``
    is ``det(f_u, f_v, nu)``.
    """
    if isinstance(m, KossowskiMetric):
        m = m.fundamental_form()
    if m.lam is None:
        raise errors.WrongOrientation("kappa_s needs the signed area density lambda")
    lam_v = m.lam.dv().restrict_v0()
    if not lam_v[0] > tol:
        raise errors.WrongOrientation("lambda_v must be positive on the singular axis")
    E, F = m.E, m.F
    E0 = E.restrict_v0()
    Fv = F.dv()
    num = -(Fv.restrict_v0() * E.du().restrict_v0()) + E0 * Fv.du().restrict_v0() * 2.0 - E0 * E.dv().dv().restrict_v0()
    den = E0 * E0.sqrt() * lam_v * 2.0
    return num / den
