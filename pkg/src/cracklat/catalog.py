"""Worked examples used throughout the tests and the README."""
from __future__ import annotations

from itertools import product

from .fan import ToricDivisor
from .lattice import LatticeSplitting
from .palp import load_selected
from .polytope import LatticePolytope
from .scaffolding import Scaffolding, Shape, Strut, validate_scaffolding


def _poly(V):
    return LatticePolytope.from_vertices(V, len(V[0]))


def _scaffold(P, shape, struts):
    return validate_scaffolding(Scaffolding(P, shape, [Strut(ToricDivisor(shape.fan, D), tuple(chi)) for D, chi in struts]))


def triangle_m():
    """conv{(1,0),(0,1),(-1,-1)}; the polytope of P^2 viewed in M."""
    return _poly([(1, 0), (0, 1), (-1, -1)])


def triangle_n():
    """Polar of :func:`triangle_m`, the fan polytope of P^2/mu_3."""
    return _poly([(-1, -1), (2, -1), (-1, 2)])


def triangle_scaffolding():
    """One strut, the anticanonical triangle of P^2."""
    sh = Shape.projective([2])
    return _scaffold(triangle_n(), sh, [((1, 1, 1), ())])


def pentagon():
    return _poly([(-1, -1), (-1, 1), (1, -1), (1, 0), (0, 1)])


def pentagon_scaffolding():
    """Two struts on shape P^2; the ambient space is P^2 x P^1."""
    sh = Shape.projective([2])
    return _scaffold(pentagon(), sh, [((1, 1, 0), ()), ((0, 0, 1), ())])


def unscaffoldable_polygon():
    """Reflexive quadrilateral cracked along P^2 with no full scaffolding of that shape."""
    return _poly([(-1, -1), (-1, 0), (0, 1), (2, -1)])


def cube_pair():
    """conv([-1,0]^3 u [0,1]^3); its polar is the A3 root polytope."""
    pts = [p for p in product((-1, 0, 1), repeat=3) if all(x <= 0 for x in p) or all(x >= 0 for x in p)]
    return _poly(pts)


def cube_pair_scaffolding():
    """Two cube struts on shape (P^1)^3."""
    sh = Shape.projective([1, 1, 1])
    return _scaffold(cube_pair(), sh, [((1, 0, 1, 0, 1, 0), ()), ((0, 1, 0, 1, 0, 1), ())])


def diamond():
    return _poly([(1, 0), (-1, 0), (0, 1), (0, -1)])


def diamond_scaffolding():
    """Two segment struts on P^1 along the direction (1,1)."""
    sh = Shape.p1((1, 1))
    return _scaffold(diamond(), sh, [((1, 0), (1,)), ((0, 1), (-1,))])


MM2_18_STRUTS = (
    [(0, -1, 0), (2, -1, 0), (0, 1, 0)],
    [(-1, -1, -1), (1, -1, -1), (-1, 1, -1)],
    [(0, 0, 1)],
)


def mm2_18():
    """Fano polytope whose polar has 15 lattice points and degree 24."""
    return _poly([v for s in MM2_18_STRUTS for v in s])


def mm2_18_shape():
    return Shape(Shape.projective([2]).fan, LatticeSplitting.from_nbar([(1, 0, 0), (0, 1, 0)]))


def mm2_18_scaffolding():
    """Two triangles at heights 0 and -1 and the vertex (0,0,1), on shape P^2."""
    from .scaffolding import strut_from_polytope

    sh = mm2_18_shape()
    struts = [strut_from_polytope(sh, _poly(s)) for s in MM2_18_STRUTS]
    return validate_scaffolding(Scaffolding(mm2_18(), sh, struts))


NEGATIVE_IDS = (15, 16, 58, 59, 61, 65, 66, 192, 193, 197)


def ks3(palp_id):
    """Bundled reflexive 3-polytope by its 1-based position in the public list."""
    for i, P in load_selected():
        if i == palp_id:
            return P
    raise KeyError(palp_id)


def cyclic_shift(P):
    """(a, b, c) -> (c, a, b); sends the id-15 edge direction (1,1,0) to (0,1,1)."""
    return _poly([(c, a, b) for a, b, c in P.vertices])
