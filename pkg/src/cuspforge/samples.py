"""Small polynomial germs used as fixtures by the tests and the CLI demos."""
from __future__ import annotations

from fractions import Fraction as Q

from .edge import MapGerm

# f(u, v) = (u, -v^2/2 + u^3/6, u^2/2 + u^3/6 + v^3/6)
F_TERMS = {
    (1, 0): (1, 0, 0),
    (0, 2): (0, Q(-1, 2), 0),
    (3, 0): (0, Q(1, 6), Q(1, 6)),
    (2, 0): (0, 0, Q(1, 2)),
    (0, 3): (0, 0, Q(1, 6)),
}

# A sixth-order polynomial with the same first fundamental form as f up to
# total degree five and the same image of the singular curve.
_G1 = {(1, 0): 1, (2, 2): Q(1, 2), (3, 2): Q(-1, 2), (1, 4): Q(-1, 2), (0, 5): Q(1, 30), (3, 3): Q(1, 6),
       (2, 4): Q(9, 4), (0, 6): Q(1, 6)}
_G2 = {(0, 2): Q(1, 2), (3, 0): Q(1, 6), (2, 2): -1, (1, 3): Q(1, 3), (3, 2): 2, (2, 3): Q(-1, 3), (1, 4): 1,
       (0, 5): Q(-1, 5), (4, 2): Q(-9, 4), (2, 4): -6, (1, 5): Q(13, 15), (0, 6): Q(-11, 36)}
_G3 = {(2, 0): Q(1, 2), (3, 0): Q(1, 6), (1, 2): -1, (0, 3): Q(1, 6), (2, 2): 1, (0, 4): Q(1, 2),
       (2, 3): Q(-1, 3), (1, 4): Q(-5, 2), (0, 5): Q(-1, 15), (4, 2): -2, (3, 3): Q(2, 3), (2, 4): 6,
       (1, 5): Q(2, 5), (0, 6): Q(25, 18)}


def _merge(*components):
    terms = {}
    for k, comp in enumerate(components):
        for ij, c in comp.items():
            xyz = list(terms.get(ij, (0, 0, 0)))
            xyz[k] = c
            terms[ij] = tuple(xyz)
    return terms


G_TERMS = _merge(_G1, _G2, _G3)


def _germ(terms, order, v_order=None):
    v_order = order if v_order is None else v_order
    return MapGerm.from_terms({ij: tuple(float(c) for c in xyz) for ij, xyz in terms.items()}, order, v_order)


def example_f(order=8):
    return _germ(F_TERMS, order)


def example_g(order=8):
    return _germ(G_TERMS, order)


def standard_cusp(order=8):
    """``(u, v^2, v^3)``: a cuspidal edge along a straight line, not generic."""
    return _germ({(1, 0): (1, 0, 0), (0, 2): (0, 1, 0), (0, 3): (0, 0, 1)}, order)


def plane(order=8):
    return _germ({(1, 0): (1, 0, 0), (0, 1): (0, 1, 0)}, order)
