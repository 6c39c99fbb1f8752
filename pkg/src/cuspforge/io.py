"""JSON germ and curve files, and OBJ/CSV mesh export."""
from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np

from . import errors
from .curves import SpaceCurveJet, curve_from_curvature_torsion
from .edge import RAW, MapGerm
from .series import Jet1

log = logging.getLogger(__name__)


class FileFormatError(errors.CuspForgeError, ValueError):
    """Malformed germ, curve or range input."""


def _int(d, key):
    v = d.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise FileFormatError(f"{key!r} must be a non-negative integer")
    return v


def _num(d, key):
    v = d.get(key, 0.0)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
        raise FileFormatError(f"{key!r} must be a finite number")
    return float(v)


def germ_to_dict(germ: MapGerm):
    arr = germ.array()
    nu, nv = arr.shape[1] - 1, arr.shape[2] - 1
    coeffs = []
    for i in range(nu + 1):
        for j in range(nv + 1):
            xyz = arr[:, i, j].astype(float)
            if np.any(xyz != 0):
                coeffs.append({"i": i, "j": j, "x": float(xyz[0]), "y": float(xyz[1]), "z": float(xyz[2])})
    out = {"u_order": nu, "v_order": nv, "coeffs": coeffs}
    if germ.degree < nu + nv:
        out["certified_degree"] = int(germ.degree)
    if germ.status != RAW:
        out["status"] = germ.status
    return out


def germ_from_dict(d, order=None):
    """Parse a germ document.

    Without ``certified_degree`` the document is an exact polynomial and may
    be zero-padded to ``order``; with it the rectangle is taken as is.
    """
    if not isinstance(d, dict):
        raise FileFormatError("germ document must be a JSON object")
    nu, nv = _int(d, "u_order"), _int(d, "v_order")
    raw = d.get("coeffs")
    if not isinstance(raw, list):
        raise FileFormatError("'coeffs' must be a list")
    degree = d.get("certified_degree")
    if degree is not None and (not isinstance(degree, int) or degree < 0):
        raise FileFormatError("'certified_degree' must be a non-negative integer")
    if degree is None and order is not None:
        nu, nv = max(nu, order), max(nv, order)
    arr = np.zeros((3, nu + 1, nv + 1))
    seen = set()
    for c in raw:
        if not isinstance(c, dict):
            raise FileFormatError("every coefficient must be an object")
        i, j = _int(c, "i"), _int(c, "j")
        if (i, j) in seen:
            raise FileFormatError(f"duplicate coefficient ({i}, {j})")
        if i > _int(d, "u_order") or j > _int(d, "v_order"):
            raise FileFormatError(f"coefficient ({i}, {j}) lies outside the declared orders")
        seen.add((i, j))
        arr[:, i, j] = (_num(c, "x"), _num(c, "y"), _num(c, "z"))
    status = d.get("status", RAW)
    return MapGerm.from_array(arr, degree, status)


def read_germ(path, order=None):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc
    return germ_from_dict(doc, order)


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_germ(germ, path):
    Path(path).write_text(dumps(germ_to_dict(germ)))


def curve_from_dict(d, order=8):
    if not isinstance(d, dict):
        raise FileFormatError("curve document must be a JSON object")
    kind = d.get("kind")
    if kind == "explicit":
        pts = np.asarray(d.get("coeffs"), dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise FileFormatError("explicit curve needs coeffs as a list of [x, y, z] per degree")
        return SpaceCurveJet.from_polynomial(pts, max(order, pts.shape[0] - 1))
    if kind == "intrinsic":
        kappa = np.asarray(d.get("kappa"), dtype=float)
        tau = np.asarray(d.get("tau"), dtype=float)
        if kappa.ndim != 1 or tau.ndim != 1 or kappa.size == 0 or tau.size == 0:
            raise FileFormatError("intrinsic curve needs non-empty kappa and tau lists")
        if not kappa[0] > 0:
            raise FileFormatError("kappa[0] must be positive")
        kj = Jet1(np.pad(kappa, (0, max(0, order - kappa.size + 1))))
        tj = Jet1(np.pad(tau, (0, max(0, order - tau.size + 1))))
        frame0 = d.get("frame0")
        p0 = d.get("p0")
        return curve_from_curvature_torsion(kj, tj, frame0=frame0, p0=p0)
    raise FileFormatError("curve 'kind' must be 'explicit' or 'intrinsic'")


def read_curve(path, order=8):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc
    return curve_from_dict(doc, order)


def curve_to_dict(curve: SpaceCurveJet):
    return {"kind": "explicit", "coeffs": [[float(x) for x in row] for row in curve.array().T]}


def parse_range(text):
    """``a:b:n`` -> ``(a, b, n)`` with ``n >= 2``."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise FileFormatError(f"range {text!r} must look like a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise FileFormatError(f"range {text!r} must look like a:b:n") from exc
    if n < 2 or not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise FileFormatError(f"range {text!r} needs a < b and n >= 2")
    return a, b, n


def sample_grid(germ, u_range, v_range):
    """Vertices in row-major ``(u, v)`` order: index ``i * m + j``."""
    us = np.linspace(*u_range[:2], u_range[2])
    vs = np.linspace(*v_range[:2], v_range[2])
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    xyz = germ(uu.ravel(), vv.ravel())
    tail_check(germ, u_range, v_range)
    return uu.ravel(), vv.ravel(), xyz


def tail_check(germ, u_range, v_range, rel=1e-3):
    """Warn when the last certified degree still matters on the sample box."""
    r_u = max(abs(u_range[0]), abs(u_range[1]))
    r_v = max(abs(v_range[0]), abs(v_range[1]))
    d = germ.degree
    top = max(_homogeneous_bound(c, d, r_u, r_v) for c in germ.vec)
    scale = max(_homogeneous_bound(c, 1, r_u, r_v) for c in germ.vec)
    if top > rel * max(scale, 1e-300):
        log.warning("sample box may exceed the certified region: degree-%d terms reach %.3g", d, top)
        return False
    return True


def _homogeneous_bound(jet, d, ru, rv):
    c = jet.certified()
    total = 0.0
    for i in range(min(d, c.shape[0] - 1) + 1):
        j = d - i
        if j < c.shape[1]:
            total += abs(float(c[i, j])) * ru**i * rv**j
    return total


def _fmt(x):
    return f"{float(x):.17g}"


def mesh_obj(germ, u_range, v_range):
    _, _, xyz = sample_grid(germ, u_range, v_range)
    n, m = u_range[2], v_range[2]
    lines = ["# cuspforge mesh", f"# grid {n} x {m}"]
    lines += [f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}" for p in xyz]
    for i in range(n - 1):
        for j in range(m - 1):
            a = i * m + j + 1
            lines.append(f"f {a} {a + m} {a + m + 1} {a + 1}")
    return "\n".join(lines) + "\n"


def mesh_csv(germ, u_range, v_range):
    uu, vv, xyz = sample_grid(germ, u_range, v_range)
    lines = ["u,v,x,y,z"]
    lines += [",".join(_fmt(t) for t in (u, v, *p)) for u, v, p in zip(uu, vv, xyz)]
    return "\n".join(lines) + "\n"
