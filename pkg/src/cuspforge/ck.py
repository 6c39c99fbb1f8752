"""Cauchy-Kovalevskaya recursion for germs with a prescribed first fundamental form.

Unknowns are ``g`` (the germ), ``r = g_u`` and ``psi`` with ``g_v = v psi``.
They satisfy

    g_v = v psi,   r_v = v psi_u,
    (psi, g_u, r_u) psi_v = (s1, s2, s3 + v psi_u . psi_u),

where the sources ``s1, s2, s3`` only depend on the metric.  Every unknown is
stored as a list of v-levels, each a ``Jet1`` in ``u``; level ``k + 1`` is
produced from levels ``<= k`` by one adjugate solve over the ``Jet1`` ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import errors
from .curves import NormalField, SpaceCurveJet
from .edge import (
    ADAPT_TOL,
    ADAPTED,
    KossowskiMetric,
    MapGerm,
    check_adapted,
    edge_invariants,
    extract_phi,
)
from .series import Jet1, Jet2, JetMat3, JetVec3

GERM = "germ"
METRIC = "metric"


@dataclass(frozen=True)
class RhsData:
    mode: str
    s1: Jet2
    s2: Jet2
    s3: Jet2
    scale: Jet1 | None = None  # |psi(u, 0)| demanded by the metric; None means 1

    @property
    def degree(self):
        return min(self.s1.degree, self.s2.degree, self.s3.degree)


@dataclass
class CKSolution:
    germ: MapGerm
    psi: JetVec3
    r: JetVec3
    degree: int
    level_orders: list = field(default_factory=list)


def _germ_vec(f):
    return f.vec if isinstance(f, MapGerm) else f


def build_rhs_from_germ(f_ad, tol=ADAPT_TOL, check=True):
    """Sources read off an adapted germ."""
    vec = _germ_vec(f_ad)
    if check:
        report = check_adapted(vec, tol)
        if not report.ok:
            raise errors.NotAdapted(f"germ is not in adapted coordinates: {report.as_dict()}")
        if not edge_invariants(vec, tol).generic:
            raise errors.NonGeneric("limiting normal curvature vanishes at the origin")
    fu = vec.du()
    phi = extract_phi(vec)
    phi_v = phi.dv()
    pp = phi.norm2()
    s1 = phi_v.dot(phi)
    s2 = phi_v.dot(fu)
    s3 = phi.dot(fu.du()).dv() - pp.du().du().mul_v() * 0.5
    return RhsData(GERM, s1, s2, s3)


def build_rhs_from_fundamental_form(E, F, G):
    """Same sources as :func:`build_rhs_from_germ`, computed from ``E, F, G`` alone."""
    pp = G.div_v().div_v()  # phi . phi
    fphi = F.div_v()  # f_u . phi
    s1 = pp.dv() * 0.5
    s2 = fphi.dv() - pp.du().mul_v() * 0.5
    s3 = (F.du() - E.dv() * 0.5).div_v().dv() - pp.du().du().mul_v() * 0.5
    return RhsData(GERM, s1, s2, s3)


def build_rhs_from_metric(m: KossowskiMetric, tol=1e-9):
    m.validate(tol)
    E0, G0 = m.E0, m.G0
    s1 = G0.dv() * 0.5
    s2 = -(G0.du().mul_v() * 0.5)
    s3 = -(E0.dv() * 3.0 + E0.dv().dv().mul_v() + G0.du().du().mul_v()) * 0.5
    return RhsData(METRIC, s1, s2, s3, scale=G0.restrict_v0().sqrt())


def _vec_columns(levels):
    return [JetVec3(lv) for lv in levels]


def _column(jet, k):
    try:
        return jet.column(k)
    except errors.ZeroBudget:
        return None


def _derive(vec):
    if vec.degree < 1:
        return None
    return vec.derive()


def _assemble(levels, u_order, v_order):
    comps = []
    for i in range(3):
        cols = [lv[i] for lv in levels]
        j = Jet2.from_columns(cols, u_order)
        comps.append(j.fit(u_order, v_order) if j.v_order < v_order else j)
    return JetVec3(comps)


def ck_solve(rhs, sigma, X, v_order=None, u_order=None, degree=None, det_tol=1e-9):
    """Solve for ``(g, psi)`` with ``g(u, 0) = sigma``, ``r(u, 0) = sigma'``, ``psi(u, 0) = X``.

    ``u_order`` is the u-budget ``M`` of level 0; level ``k`` is kept to
    order ``M - k``.  ``degree`` is the requested certified total degree;
    :class:`BudgetExhausted` is raised when the data cannot deliver it.
    """
    s_vec = sigma.vec if isinstance(sigma, SpaceCurveJet) else sigma
    x_vec = X.w if isinstance(X, NormalField) else X
    N = s_vec.degree if v_order is None else v_order
    M = s_vec.degree if u_order is None else u_order

    d1 = s_vec.derive()
    d2 = d1.derive()
    kt0 = float(np.sqrt(d2.norm2()[0]))
    det0 = float(np.linalg.det(np.stack([x_vec.at0(), d1.at0(), d2.at0()])))
    if not abs(det0) >= det_tol * kt0 or kt0 == 0.0:
        raise errors.MatrixSingular(
            f"initial frame (X, sigma', sigma'') is singular: det = {det0:.3g}, curvature = {kt0:.3g}"
        )

    g = [s_vec.truncate(M)]
    r = [d1.truncate(M)]
    psi = [x_vec.truncate(M)]
    # psi_v levels P[k] (coefficient of v^k in psi_v)
    P = []
    m0_inv = JetMat3([psi[0], d1, d2]).inverse()
    rows_cache = []

    for k in range(N):
        L = M - k - 1
        if L < 0:
            break
        cols = [_column(s, k) for s in (rhs.s1, rhs.s2, rhs.s3)]
        if any(c is None for c in cols):
            break
        acc3 = cols[2]
        ok = True
        for a in range(k):
            pa, pb = _derive(psi[a]), _derive(psi[k - 1 - a])
            if pa is None or pb is None:
                ok = False
                break
            acc3 = acc3 + pa.dot(pb)
        if not ok:
            break
        acc = JetVec3((cols[0], cols[1], acc3))
        for j in range(1, k + 1):
            if j > len(rows_cache):
                gu, ru = _derive(g[j]), _derive(r[j])
                if gu is None or ru is None:
                    ok = False
                    break
                rows_cache.append(JetMat3([psi[j], gu, ru]))
            acc = acc - rows_cache[j - 1].matvec(P[k - j])
        if not ok:
            break
        pk = m0_inv.matvec(acc).truncate(L)
        P.append(pk)
        psi.append(pk / (k + 1))
        if k == 0:
            # g_v = v psi has no constant term, so the v^1 levels of g and r vanish
            g.append(JetVec3(Jet1(np.zeros(L + 1)) for _ in range(3)))
            r.append(JetVec3(Jet1(np.zeros(L + 1)) for _ in range(3)))
        else:
            g.append((psi[k - 1] / (k + 1)).truncate(L))
            dpsi = _derive(psi[k - 1])
            if dpsi is None:
                psi.pop()
                P.pop()
                break
            r.append((dpsi / (k + 1)).truncate(L))

    # the last level of psi is one step ahead of g; keep every unknown on the same levels
    n_levels = min(len(g), len(r), len(psi))
    g, r, psi = g[:n_levels], r[:n_levels], psi[:n_levels]
    level_orders = [lv.degree for lv in g]
    g_vec = _assemble(g, M, N)
    psi_vec = _assemble(psi, M, N)
    r_vec = _assemble(r, M, N)
    d = g_vec.degree
    if degree is not None and d < degree:
        raise errors.BudgetExhausted(f"certified degree {d} is below the requested {degree}")
    return CKSolution(MapGerm(g_vec, ADAPTED), psi_vec, r_vec, d, level_orders)


@dataclass
class ResidualReport:
    equations: dict
    scale: float

    @property
    def max(self):
        return max(self.equations.values())

    def ok(self, rel=1e-10):
        return self.max <= rel * max(self.scale, 1.0)


def _safe(fn):
    try:
        return fn()
    except errors.ZeroBudget:
        return 0.0


def residual(g, psi, rhs, r=None):
    """Largest certified coefficient of each equation's left side minus right side."""
    g_vec = _germ_vec(g)
    gu = g_vec.du()
    r = gu if r is None else r
    psi_v = psi.dv()
    eqs = {
        "g_v": _safe(lambda: (g_vec.dv() - psi.map(lambda c: c.mul_v())).max_abs()),
        "r_v": _safe(lambda: (r.dv() - psi.du().map(lambda c: c.mul_v())).max_abs()),
        "r": _safe(lambda: (r - gu).max_abs()),
        "psi_v.psi": _safe(lambda: (psi_v.dot(psi) - rhs.s1).max_abs()),
        "psi_v.g_u": _safe(lambda: (psi_v.dot(gu) - rhs.s2).max_abs()),
        "psi_v.r_u": _safe(
            lambda: (psi_v.dot(r.du()) - rhs.s3 - psi.du().norm2().mul_v()).max_abs()
        ),
    }
    return ResidualReport({k: float(v) for k, v in eqs.items()}, float(g_vec.max_abs()))
