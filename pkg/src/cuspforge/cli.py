"""Command line front end: ``cuspforge invariants|adapt|deform|verify|mesh``.

Exit codes: 0 success, 1 a verification gate failed, 2 bad input or usage,
3 not a cuspidal edge, 4 not generic, 5 curvature condition violated,
6 series budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import errors, io
from .curves import parse_branch
from .edge import adapt_germ, check_adapted, edge_invariants
from .pipeline import (
    deform_to_curve,
    isomer,
    kappa_nu_family,
    planar_normalization,
    verify_isometry,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NOT_CUSPIDAL = 3
EXIT_NON_GENERIC = 4
EXIT_CURVATURE = 5
EXIT_BUDGET = 6

DEFAULTS = {"order": 8, "tol": 1e-8, "branch": "plus", "workers": 1}
ENV = {"order": ("CFORGE_ORDER", int), "tol": ("CFORGE_TOL", float), "branch": ("CFORGE_BRANCH", str),
       "workers": ("CFORGE_WORKERS", int)}

log = logging.getLogger("cuspforge")


def resolve_settings(args, environ=None):
    """Flags override environment, which overrides the config file, which overrides defaults."""
    environ = os.environ if environ is None else environ
    settings = dict(DEFAULTS)
    cfg_path = args.config or environ.get("CFORGE_CONFIG")
    if cfg_path:
        try:
            cfg = json.loads(Path(cfg_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise io.FileFormatError(f"cannot read config {cfg_path}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise io.FileFormatError("config file must hold a JSON object")
        settings.update({k: cfg[k] for k in DEFAULTS if k in cfg})
    for key, (name, conv) in ENV.items():
        if name in environ:
            try:
                settings[key] = conv(environ[name])
            except ValueError as exc:
                raise io.FileFormatError(f"bad value for {name}: {environ[name]!r}") from exc
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    settings["branch"] = parse_branch(settings["branch"])
    return settings


def _series(jet):
    return None if jet is None else [float(c) for c in jet.coeffs]


def invariants_report(inv):
    return {
        "at_origin": inv.at0(),
        "series": {
            "kappa_s": _series(inv.kappa_s),
            "kappa_nu": _series(inv.kappa_nu),
            "kappa_c": _series(inv.kappa_c),
            "kappa": _series(inv.kappa),
            "tau": _series(inv.tau),
        },
        "generic": inv.generic,
        "cuspidal_edge": inv.cuspidal_edge,
        "conditions": inv.conditions,
        "conditions_agree": len(set(inv.conditions.values())) == 1,
    }


def _emit(doc, args):
    text = io.dumps(doc)
    if args.report:
        Path(args.report).write_text(text)
    if not args.quiet:
        sys.stdout.write(text)


def cmd_invariants(args, st):
    germ = io.read_germ(args.germ, st["order"])
    ad = adapt_germ(germ, tol=st["tol"])
    inv = edge_invariants(ad.germ, generic_tol=st["tol"])
    if not inv.cuspidal_edge:
        raise errors.DegenerateEdge("cuspidal curvature vanishes at the origin")
    doc = invariants_report(inv)
    doc["orientation_flipped"] = ad.flipped
    doc["certified_degree"] = int(ad.germ.degree)
    _emit(doc, args)
    return EXIT_OK


def cmd_adapt(args, st):
    germ = io.read_germ(args.germ, st["order"])
    ad = adapt_germ(germ, orient=not args.no_orient, tol=st["tol"])
    if args.out:
        io.write_germ(ad.germ, args.out)
    _emit({"report": ad.report.as_dict(), "orientation_flipped": ad.flipped,
           "certified_degree": int(ad.germ.degree)}, args)
    return EXIT_OK


def _result_doc(res):
    doc = {
        "branch": res.branch,
        "parameter": res.parameter,
        "certified_degree": int(res.germ.degree),
        "verification": res.verification.as_dict(),
        "warnings": list(res.warnings),
        "ok": res.ok,
    }
    if res.result_invariants is not None:
        inv = res.result_invariants
        doc["invariants"] = inv.at0()
        doc["abs_product"] = float(abs(inv.product()[0]))
        if inv.tau is not None:
            doc["boundary_torsion_max"] = float(np.max(np.abs(inv.tau.coeffs)))
    return doc


def _family_path(out, k):
    p = Path(out)
    return p.with_name(f"{p.stem}_{k:03d}{p.suffix or '.json'}")


def cmd_deform(args, st):
    germ = io.read_germ(args.germ, st["order"])
    order, branch, workers = st["order"], st["branch"], st["workers"]
    if args.curve:
        results = [deform_to_curve(germ, io.read_curve(args.curve, order + 2), branch, order=order)]
    elif args.isomer:
        results = [isomer(germ, order=order)]
    elif args.planar:
        fam = planar_normalization(germ, branch, order=order, workers=workers)
        results = fam.members
    else:
        s0, s1, n = io.parse_range(args.family)
        results = kappa_nu_family(germ, np.linspace(s0, s1, n), branch, order=order, workers=workers)
    docs = []
    for k, res in enumerate(results):
        if args.out:
            path = args.out if len(results) == 1 else _family_path(args.out, k)
            io.write_germ(res.germ, path)
        docs.append(_result_doc(res))
    doc = {"results": docs, "ok": all(d["ok"] for d in docs)}
    if args.planar:
        doc["reflection_deviation"] = fam.reflection
    _emit(doc, args)
    return EXIT_OK if doc["ok"] else EXIT_VERIFY


def cmd_verify(args, st):
    f = io.read_germ(args.germ, st["order"])
    g = io.read_germ(args.other, st["order"])
    report = verify_isometry(f, g, degree=args.degree)
    doc = report.as_dict()
    doc["f_adapted"] = check_adapted(f).ok
    doc["g_adapted"] = check_adapted(g).ok
    _emit(doc, args)
    return EXIT_OK if report.iform <= args.iform_tol else EXIT_VERIFY


def cmd_mesh(args, st):
    germ = io.read_germ(args.germ, st["order"])
    u_range, v_range = io.parse_range(args.u), io.parse_range(args.v)
    text = io.mesh_obj(germ, u_range, v_range) if args.format == "obj" else io.mesh_csv(germ, u_range, v_range)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, help="jet order N (default 8)")
    common.add_argument("--tol", type=float, help="adaptation and genericity tolerance (default 1e-8)")
    common.add_argument("--config", help="JSON file with defaults for order, tol, branch, workers")
    common.add_argument("--quiet", action="store_true", help="suppress the JSON report on stdout")
    common.add_argument("--report", help="also write the JSON report to this file")

    p = argparse.ArgumentParser(prog="cuspforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", parents=[common], help="edge invariants in adapted coordinates")
    s.add_argument("germ")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("adapt", parents=[common], help="rewrite a germ in adapted coordinates")
    s.add_argument("germ")
    s.add_argument("--out")
    s.add_argument("--no-orient", action="store_true", help="keep the sign of the limiting normal curvature")
    s.set_defaults(func=cmd_adapt)

    s = sub.add_parser("deform", parents=[common], help="isometric deformations")
    s.add_argument("germ")
    what = s.add_mutually_exclusive_group(required=True)
    what.add_argument("--curve", help="target curve JSON")
    what.add_argument("--isomer", action="store_true")
    what.add_argument("--planar", action="store_true")
    what.add_argument("--family", metavar="S0:S1:N", help="limiting-normal-curvature family")
    s.add_argument("--branch", help="+ or - (default +)")
    s.add_argument("--workers", type=int, help="processes for family members")
    s.add_argument("--out", help="output germ file (families get _000, _001, ... suffixes)")
    s.set_defaults(func=cmd_deform)

    s = sub.add_parser("verify", parents=[common], help="compare first fundamental forms of two germs")
    s.add_argument("germ")
    s.add_argument("other")
    s.add_argument("--degree", type=int, help="compare monomials up to this total degree")
    s.add_argument("--iform-tol", type=float, default=1e-7)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("mesh", parents=[common], help="sample a germ on a grid")
    s.add_argument("germ")
    s.add_argument("--u", required=True, metavar="A:B:N")
    s.add_argument("--v", required=True, metavar="C:D:M")
    s.add_argument("--format", choices=("obj", "csv"), default="obj")
    s.add_argument("--out")
    s.set_defaults(func=cmd_mesh)
    return p


def exit_code(exc):
    if isinstance(exc, io.FileFormatError) or not isinstance(exc, errors.CuspForgeError):
        return EXIT_USAGE
    if isinstance(exc, (errors.DegenerateEdge, errors.NotDivisible, errors.DegenerateFrame)):
        return EXIT_NOT_CUSPIDAL
    # CurvatureTooSmall is also a GenericityViolated, so it is tested first
    if isinstance(exc, (errors.CurvatureTooSmall, errors.MatrixSingular, errors.MuOutOfRange, errors.DegenerateCurve)):
        return EXIT_CURVATURE
    if isinstance(exc, errors.GenericityViolated):
        return EXIT_NON_GENERIC
    if isinstance(exc, (errors.BudgetExhausted, errors.ZeroBudget)):
        return EXIT_BUDGET
    return EXIT_VERIFY


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        st = resolve_settings(args)
        if st["order"] < 3:
            raise io.FileFormatError("order must be at least 3")
        return args.func(args, st)
    except (errors.CuspForgeError, OSError, ValueError) as exc:
        code = exit_code(exc)
        print(f"cuspforge: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
