"""Cuspidal edges as truncated power series: invariants and isometric deformations."""
from . import errors
from .ck import (
    CKSolution,
    RhsData,
    build_rhs_from_fundamental_form,
    build_rhs_from_germ,
    build_rhs_from_metric,
    ck_solve,
    residual,
)
from .curves import (
    FrenetData,
    NormalField,
    SpaceCurveJet,
    arclength_reparam,
    curve_from_curvature_torsion,
    frenet_apparatus,
    initial_normal_field,
    orthonormal_completion,
)
from .edge import (
    EdgeInvariants,
    FundForm,
    KossowskiMetric,
    MapGerm,
    adapt_germ,
    check_adapted,
    edge_invariants,
    extract_phi,
    first_fundamental_form,
    kappa_s_intrinsic,
    unit_normal,
)
from .pipeline import (
    DeformationResult,
    FamilySpec,
    deform_to_curve,
    isomer,
    kappa_nu_family,
    planar_normalization,
    pull_back,
    realize_metric,
    verify_isometry,
)
from .series import Jet1, Jet2, JetMat3, JetVec3, get_backend, set_backend

__version__ = "0.1.0"

__all__ = [
    "errors",
    "CKSolution",
    "RhsData",
    "build_rhs_from_fundamental_form",
    "build_rhs_from_germ",
    "build_rhs_from_metric",
    "ck_solve",
    "residual",
    "FrenetData",
    "NormalField",
    "SpaceCurveJet",
    "arclength_reparam",
    "curve_from_curvature_torsion",
    "frenet_apparatus",
    "initial_normal_field",
    "orthonormal_completion",
    "EdgeInvariants",
    "FundForm",
    "KossowskiMetric",
    "MapGerm",
    "adapt_germ",
    "check_adapted",
    "edge_invariants",
    "extract_phi",
    "first_fundamental_form",
    "kappa_s_intrinsic",
    "unit_normal",
    "DeformationResult",
    "FamilySpec",
    "deform_to_curve",
    "isomer",
    "kappa_nu_family",
    "planar_normalization",
    "pull_back",
    "realize_metric",
    "verify_isometry",
    "Jet1",
    "Jet2",
    "JetMat3",
    "JetVec3",
    "get_backend",
    "set_backend",
]
