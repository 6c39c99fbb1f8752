"""Truncated power-series (jet) arithmetic in one and two variables."""
from ._backend import AVAILABLE as AVAILABLE_BACKENDS
from ._backend import get_backend, set_backend
from .jet import DIV_TOL, UNIT_TOL, Jet1, Jet2, max_diff
from .vec import JetMat3, JetVec3, det3

__all__ = [
    "AVAILABLE_BACKENDS",
    "DIV_TOL",
    "UNIT_TOL",
    "Jet1",
    "Jet2",
    "JetMat3",
    "JetVec3",
    "det3",
    "get_backend",
    "max_diff",
    "set_backend",
    "jet_arith",
    "jet_derive",
    "jet_div_unit",
    "jet_div_exact_v",
    "jet_sqrt",
    "jet_mat3_inverse",
    "jet_restrict_v0",
    "jet_embed_u",
    "jet_compose",
]


def jet_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def jet_derive(a, var):
    return a.derive(var)


def jet_div_unit(a, b, unit_tol=UNIT_TOL):
    return a.div_unit(b, unit_tol=unit_tol)


def jet_div_exact_v(a, div_tol=DIV_TOL):
    return a.div_v(div_tol=div_tol)


def jet_sqrt(a, unit_tol=UNIT_TOL):
    return a.sqrt(unit_tol=unit_tol)


def jet_mat3_inverse(m, unit_tol=UNIT_TOL):
    return m.inverse(unit_tol=unit_tol)


def jet_restrict_v0(a):
    return a.restrict_v0()


def jet_embed_u(a, v_order=0):
    return a.embed_u(v_order)


def jet_compose(a, xi, eta):
    return a.compose(xi, eta)
