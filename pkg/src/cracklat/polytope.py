"""Exact rational polytopes and cones.

A polytope carries both descriptions: a sorted vertex list and a list of
facet inequalities ``(u, c)`` meaning ``<u, x> >= c`` with ``u`` a primitive
integer normal.  Lower-dimensional polytopes also carry the equations
``(u, c)`` (``<u, x> = c``) of their affine hull.  Normals of facets of
lower-dimensional polytopes are taken orthogonal to the equation normals so
that the inequality list is canonical.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import ceil, floor
from typing import Optional

from . import kernels
from ._dd import cone_rays
from .errors import (
    DimensionMismatch,
    EmptyPolytopeError,
    NonPointedConeError,
    OriginNotInteriorError,
    UnboundedError,
)
from .lattice import (
    clear_denominators,
    complete_basis,
    det,
    dot,
    inverse_unimodular,
    matvec,
    identity,
    inverse_rational,
    invariant_factors,
    is_integral,
    kernel_basis,
    lattice_basis,
    normalize,
    primitive_direction,
    primitive_vector,
    rank,
    saturation,
    solve_rational,
    transpose,
    vec_gcd,
)


def _vec(v):
    return tuple(normalize(Fraction(x)) if isinstance(x, Fraction) else int(x) for x in v)


def _project_out(u, basis):
    """Orthogonal projection of u onto the complement of span(basis), as a primitive int vector."""
    if not basis:
        return primitive_direction(u)
    B = [tuple(Fraction(x) for x in b) for b in basis]
    G = [[dot(a, b) for b in B] for a in B]
    coeff = solve_rational(G, [dot(b, u) for b in B])
    w = [Fraction(x) for x in u]
    for c, b in zip(coeff, B):
        w = [x - c * y for x, y in zip(w, b)]
    if not any(w):
        return None
    return primitive_direction(w)


def _homogenize(u, c):
    """Integer row (a0, a) with a0 + <a, x> >= 0  <=>  <u, x> >= c."""
    return clear_denominators((-Fraction(c),) + tuple(Fraction(x) for x in u))


class RationalCone:
    """A polyhedral cone ``apex + cone(rays) + span(lineality)``.

    Rays are primitive, irredundant, and orthogonal to the lineality space;
    the lineality basis is a saturated HNF basis.  Build through
    :meth:`from_generators` or :meth:`from_inequalities`.
    """

    __slots__ = ("dim_ambient", "rays", "lineality", "apex", "_facets")

    def __init__(self, rays, lineality=(), apex=None, ambient_dim=None):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        lineality = tuple(tuple(int(x) for x in r) for r in lineality)
        if ambient_dim is None:
            ambient_dim = len((rays + lineality)[0]) if rays or lineality else len(apex or ())
        self.dim_ambient = ambient_dim
        self.rays = rays
        self.lineality = lineality
        self.apex = _vec(apex) if apex is not None else (0,) * ambient_dim
        self._facets = None

    @classmethod
    def from_generators(cls, gens, lineality=(), d=None, apex=None):
        gens = [clear_denominators(g) for g in gens if any(g)]
        lineality = [clear_denominators(g) for g in lineality if any(g)]
        if d is None:
            d = len((gens + lineality)[0])
        rows = gens + lineality + [tuple(-x for x in l) for l in lineality]
        if not rows:
            return cls((), (), apex, d)
        drays, dlin = cone_rays(rows, d)
        back = list(drays) + list(dlin) + [tuple(-x for x in l) for l in dlin]
        return cls.from_inequalities(back, d, apex)

    @classmethod
    def from_inequalities(cls, A, d, apex=None):
        """The cone ``{x : <a, x - apex> >= 0 for a in A}``."""
        A = [clear_denominators(a) for a in A if any(a)]
        rays, lin = cone_rays(A, d)
        lin = tuple(lin)
        canon = set()
        for r in rays:
            w = _project_out(r, lin)
            if w is not None:
                canon.add(w)
        return cls(sorted(canon), lin, apex, d)

    @property
    def dim(self):
        return rank(list(self.rays) + list(self.lineality)) if (self.rays or self.lineality) else 0

    @property
    def is_pointed(self):
        return not self.lineality

    @property
    def is_simplicial(self):
        return len(self.rays) == self.dim - len(self.lineality)

    def facets(self):
        """``(normals, equations)`` with cone = {x : <a, x - apex> >= 0, <b, x - apex> = 0}."""
        if self._facets is None:
            rows = list(self.rays) + list(self.lineality) + [tuple(-x for x in l) for l in self.lineality]
            d = self.dim_ambient
            if rows:
                drays, dlin = cone_rays(rows, d)
            else:
                drays, dlin = (), identity(d)
            normals = sorted({_project_out(r, dlin) for r in drays} - {None})
            self._facets = (tuple(normals), tuple(dlin))
        return self._facets

    def dual(self) -> "RationalCone":
        normals, eqs = self.facets()
        return RationalCone(normals, eqs, None, self.dim_ambient)

    def contains(self, x) -> bool:
        y = [Fraction(a) - Fraction(b) for a, b in zip(x, self.apex)]
        normals, eqs = self.facets()
        return all(dot(a, y) >= 0 for a in normals) and all(dot(b, y) == 0 for b in eqs)

    def translate_to_origin(self) -> "RationalCone":
        return RationalCone(self.rays, self.lineality, None, self.dim_ambient)

    def linear_image(self, A) -> "RationalCone":
        """Image under the integer matrix A (rows act on column vectors)."""
        gens = [tuple(dot(row, r) for row in A) for r in self.rays]
        lin = [tuple(dot(row, r) for row in A) for r in self.lineality]
        apex = tuple(dot(row, self.apex) for row in A)
        return RationalCone.from_generators(gens, lin, len(A), apex)

    def key(self):
        return (self.dim_ambient, self.apex, self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, RationalCone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def same_cone(self, other) -> bool:
        """Equality of the underlying cones, ignoring the apex."""
        return (self.rays, self.lineality) == (other.rays, other.lineality)

    def __repr__(self):
        s = f"RationalCone(rays={list(self.rays)}"
        if self.lineality:
            s += f", lineality={list(self.lineality)}"
        if any(self.apex):
            s += f", apex={self.apex}"
        return s + ")"


def is_unimodular_cone(C: RationalCone, modulo_lineality: bool = False) -> bool:
    """Simplicial with primitive rays extending to a basis of the saturated span.

    With ``modulo_lineality`` the test is made in the quotient by the
    lineality space; otherwise a non-pointed cone is an error.
    """
    if C.lineality and not modulo_lineality:
        raise NonPointedConeError("cone is not pointed")
    if not C.is_simplicial:
        return False
    if not C.rays:
        return True
    return all(d == 1 for d in invariant_factors(_quotient_rays(C)))


def _quotient_rays(C: RationalCone):
    """Primitive images of the rays in the lattice ``Z^n / (lineality)``."""
    if not C.lineality:
        return list(C.rays)
    n = C.dim_ambient
    B = transpose(complete_basis(C.lineality, n))
    Q = inverse_unimodular(B)[len(C.lineality):]
    return [primitive_vector(matvec(Q, r)) for r in C.rays]


def cone_index(C: RationalCone) -> int:
    """Index of the sublattice generated by the rays in their saturated span (simplicial cones)."""
    out = 1
    for d in invariant_factors(_quotient_rays(C)) if C.rays else ():
        out *= d
    return out


class Face:
    __slots__ = ("polytope", "dim", "vertex_indices", "inequality_indices")

    def __init__(self, polytope, dim, vertex_indices, inequality_indices):
        self.polytope = polytope
        self.dim = dim
        self.vertex_indices = frozenset(vertex_indices)
        self.inequality_indices = frozenset(inequality_indices)

    @property
    def vertices(self):
        V = self.polytope.vertices
        return tuple(V[i] for i in sorted(self.vertex_indices))

    def as_polytope(self) -> "LatticePolytope":
        return LatticePolytope.from_vertices(self.vertices, self.polytope.ambient_dim)

    def barycenter(self):
        vs = self.vertices
        return tuple(normalize(sum(Fraction(v[i]) for v in vs) / len(vs)) for i in range(self.polytope.ambient_dim))

    def __eq__(self, other):
        return (
            isinstance(other, Face)
            and self.polytope is other.polytope
            and self.vertex_indices == other.vertex_indices
        )

    def __hash__(self):
        return hash((id(self.polytope), self.vertex_indices))

    def __repr__(self):
        return f"Face(dim={self.dim}, vertices={list(self.vertices)})"


class LatticePolytope:
    """Bounded nonempty rational polytope with both descriptions."""

    def __init__(self, vertices, inequalities, equations=(), ambient_dim=None):
        self.vertices = tuple(sorted(_vec(v) for v in vertices))
        self.inequalities = tuple(inequalities)
        self.equations = tuple(equations)
        self.ambient_dim = ambient_dim if ambient_dim is not None else len(self.vertices[0])
        self._faces = None
        self._facet_sets = None

    # construction -------------------------------------------------------

    @classmethod
    def from_vertices(cls, points, ambient_dim=None) -> "LatticePolytope":
        pts = sorted({_vec(p) for p in points})
        if not pts:
            raise EmptyPolytopeError("empty point set", None)
        n = ambient_dim if ambient_dim is not None else len(pts[0])
        if any(len(p) != n for p in pts):
            raise DimensionMismatch("points of different lengths")
        rows = [clear_denominators((1,) + tuple(Fraction(x) for x in p)) for p in pts]
        drays, dlin = cone_rays(rows, n + 1)
        equations = []
        for l in dlin:
            u = primitive_direction(l[1:]) if any(l[1:]) else None
            if u is None:
                continue
            equations.append(u)
        eq_normals = [tuple(e) for e in lattice_basis(saturation(equations, n))] if equations else []
        eqs = []
        for u in eq_normals:
            c = dot(u, pts[0])
            eqs.append((u, normalize(Fraction(c))))
        ineqs = set()
        for r in drays:
            u = _project_out(r[1:], eq_normals) if any(r[1:]) else None
            if u is None:
                continue
            c = min(dot(u, p) for p in pts)
            tight = sum(1 for p in pts if dot(u, p) == c)
            if tight == len(pts):
                continue
            ineqs.add((u, normalize(Fraction(c))))
        ineqs = sorted(ineqs)
        # keep only extreme points
        verts = []
        for p in pts:
            tight = [u for u, c in ineqs if dot(u, p) == c]
            if n == 0 or rank(tight + eq_normals) == n:
                verts.append(p)
        return cls(verts, ineqs, eqs, n)

    @classmethod
    def from_inequalities(cls, inequalities, equations=(), ambient_dim=None) -> "LatticePolytope":
        """Polytope ``{x : <u, x> >= c for (u, c) in inequalities, <u, x> = c for equations}``."""
        inequalities = [(tuple(u), c) for u, c in inequalities]
        equations = [(tuple(u), c) for u, c in equations]
        allrows = inequalities + equations
        if not allrows:
            raise UnboundedError("no constraints", None)
        n = ambient_dim if ambient_dim is not None else len(allrows[0][0])
        rows = [_homogenize(u, c) for u, c in inequalities]
        for u, c in equations:
            rows.append(_homogenize(u, c))
            rows.append(_homogenize(tuple(-x for x in u), -Fraction(c)))
        rows.append((1,) + (0,) * n)
        rays, lin = cone_rays(rows, n + 1)
        pos = [r for r in rays if r[0] > 0]
        if not pos:
            raise EmptyPolytopeError("infeasible inequality system", _farkas(inequalities, equations, n))
        for r in rays:
            if r[0] == 0:
                raise UnboundedError("unbounded: recession ray", tuple(r[1:]))
        if lin:
            raise UnboundedError("unbounded: contains a line", tuple(lin[0][1:]))
        pts = [tuple(normalize(Fraction(x, r[0])) for x in r[1:]) for r in pos]
        return cls.from_vertices(pts, n)

    # basic data ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def key(self):
        return (self.ambient_dim, self.vertices)

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"LatticePolytope(vertices={[tuple(map(str, v)) if not is_integral(v) else v for v in self.vertices]})"

    def contains(self, x) -> bool:
        return all(dot(u, x) >= c for u, c in self.inequalities) and all(
            dot(u, x) == c for u, c in self.equations
        )

    def contains_polytope(self, other) -> bool:
        return all(self.contains(v) for v in other.vertices)

    def interior_contains(self, x) -> bool:
        """Strict interior (relative interior for lower-dimensional polytopes)."""
        return all(dot(u, x) > c for u, c in self.inequalities) and all(
            dot(u, x) == c for u, c in self.equations
        )

    def tight_inequalities(self, x) -> frozenset:
        return frozenset(j for j, (u, c) in enumerate(self.inequalities) if dot(u, x) == c)

    def vertex_index(self, v) -> int:
        return self.vertices.index(_vec(v))

    def translate(self, t) -> "LatticePolytope":
        t = _vec(t)
        verts = [tuple(normalize(Fraction(a) + b) for a, b in zip(v, t)) for v in self.vertices]
        ineqs = [(u, normalize(Fraction(c) + dot(u, t))) for u, c in self.inequalities]
        eqs = [(u, normalize(Fraction(c) + dot(u, t))) for u, c in self.equations]
        return LatticePolytope(verts, sorted(ineqs), eqs, self.ambient_dim)

    def dilate(self, k) -> "LatticePolytope":
        return LatticePolytope.from_vertices(
            [tuple(normalize(Fraction(x) * k) for x in v) for v in self.vertices], self.ambient_dim
        )

    def linear_image(self, A) -> "LatticePolytope":
        """Image under x -> A x (A given as rows)."""
        return LatticePolytope.from_vertices([tuple(dot(row, v) for row in A) for v in self.vertices], len(A))

    def facet_vertex_sets(self):
        if self._facet_sets is None:
            self._facet_sets = tuple(
                frozenset(i for i, v in enumerate(self.vertices) if dot(u, v) == c)
                for u, c in self.inequalities
            )
        return self._facet_sets

    # faces ------------------------------------------------------------

    def face_lattice(self):
        """All faces, grouped by dimension: ``faces[d]`` is a tuple of Faces of dim d (index -1 is the empty face)."""
        if self._faces is None:
            self._faces = _face_lattice(self)
        return self._faces

    def faces(self, d) -> tuple:
        return self.face_lattice().get(d, ())

    def facets(self) -> tuple:
        return self.faces(self.dim - 1)

    def edges(self) -> tuple:
        return self.faces(1)

    def f_vector(self) -> tuple:
        L = self.face_lattice()
        return tuple(len(L.get(d, ())) for d in range(self.dim))

    def face_of(self, vertex_set) -> Optional[Face]:
        """The face with exactly this vertex set, or None."""
        vs = frozenset(vertex_set)
        for d, fs in self.face_lattice().items():
            for F in fs:
                if F.vertex_indices == vs:
                    return F
        return None

    def smallest_face_containing(self, points) -> Face:
        """Smallest face containing all the given points of P."""
        tight = None
        for p in points:
            t = self.tight_inequalities(p)
            tight = t if tight is None else tight & t
        fs = self.facet_vertex_sets()
        verts = frozenset(range(len(self.vertices)))
        for j in tight or ():
            verts &= fs[j]
        return self.face_of(verts)

    # duality ----------------------------------------------------------

    def polar_dual(self) -> "LatticePolytope":
        return polar_dual(self)

    def in_affine_coordinates(self):
        """Return ``(Q, origin, basis)`` with ``P = origin + basis^T Q`` and Q full-dimensional.

        ``basis`` rows form a basis of the saturated lattice parallel to the
        affine hull; ``origin`` is a lattice point of the hull when P has a
        lattice vertex, otherwise the first vertex.
        """
        n = self.ambient_dim
        eqn = [u for u, c in self.equations]
        basis = kernel_basis(eqn, n) if eqn else identity(n)
        basis = lattice_basis(basis) if basis else ()
        origin = next((v for v in self.vertices if is_integral(v)), self.vertices[0])
        k = len(basis)
        pts = []
        for v in self.vertices:
            diff = [Fraction(a) - Fraction(b) for a, b in zip(v, origin)]
            coeff = solve_rational(transpose(basis), diff) if k else ()
            pts.append(tuple(normalize(x) for x in coeff))
        if k == 0:
            Q = LatticePolytope([()], [], [], 0)
        else:
            Q = LatticePolytope.from_vertices(pts, k)
        return Q, origin, tuple(basis)


def _farkas(inequalities, equations, n):
    """Vector y >= 0 on the rows with sum y_j u_j = 0 and sum y_j c_j > 0."""
    rows = [(tuple(u), Fraction(c)) for u, c in inequalities]
    for u, c in equations:
        rows.append((tuple(u), Fraction(c)))
        rows.append((tuple(-x for x in u), -Fraction(c)))
    m = len(rows)
    A = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    for k in range(n):
        col = clear_denominators([u[k] for u, c in rows])
        A.append(col)
        A.append(tuple(-x for x in col))
    rays, _ = cone_rays(A, m)
    for y in rays:
        if sum(yi * c for yi, (u, c) in zip(y, rows)) > 0:
            return tuple(y)
    return None


def _face_lattice(P):
    nv = len(P.vertices)
    fsets = P.facet_vertex_sets()
    top = frozenset(range(nv))
    out = {P.dim: {top}}
    for d in range(P.dim, 0, -1):
        nxt = set()
        for F in out[d]:
            cands = {F & fs for fs in fsets if not F <= fs}
            cands.discard(frozenset())
            for c in cands:
                if not any(c < o for o in cands):
                    nxt.add(c)
        out[d - 1] = nxt
    result = {}
    for d, sets in out.items():
        faces = []
        for s in sorted(sets, key=lambda s: sorted(s)):
            tight = frozenset(j for j, fs in enumerate(fsets) if s <= fs)
            faces.append(Face(P, d, s, tight))
        result[d] = tuple(faces)
    result[-1] = (Face(P, -1, frozenset(), frozenset(range(len(fsets)))),)
    return result


def dual_description(vertices=None, inequalities=None, equations=(), ambient_dim=None) -> LatticePolytope:
    """Build a polytope from either description, computing the other."""
    if (vertices is None) == (inequalities is None):
        raise ValueError("give exactly one of vertices or inequalities")
    if vertices is not None:
        return LatticePolytope.from_vertices(vertices, ambient_dim)
    return LatticePolytope.from_inequalities(inequalities, equations, ambient_dim)


def polar_dual(P: LatticePolytope) -> LatticePolytope:
    """``P° = {u : <u, v> >= -1 for all v in P}``; needs the origin in the interior."""
    if not P.is_full_dimensional or any(c >= 0 for u, c in P.inequalities):
        raise OriginNotInteriorError("OriginNotInterior: the origin is not an interior point")
    verts = [tuple(normalize(Fraction(x) / -Fraction(c)) for x in u) for u, c in P.inequalities]
    ineqs = []
    for v in P.vertices:
        w = primitive_direction(v)
        lam = next(Fraction(a) / b for a, b in zip(v, w) if b)
        ineqs.append((w, normalize(-1 / lam)))
    return LatticePolytope(verts, sorted(ineqs), (), P.ambient_dim)


def dual_face(P: LatticePolytope, F: Face, dual: Optional[LatticePolytope] = None) -> Face:
    """The face of P° on which every vertex of F pairs to -1."""
    dual = dual if dual is not None else polar_dual(P)
    if F.polytope is not P:
        F = P.face_of(F.vertex_indices)
    if F.dim == P.dim:
        return dual.face_lattice()[-1][0]
    pts = [tuple(normalize(Fraction(x) / -Fraction(c)) for x in u) for j, (u, c) in enumerate(P.inequalities) if j in F.inequality_indices]
    vs = frozenset(dual.vertex_index(p) for p in pts)
    G = dual.face_of(vs)
    if G is None:
        raise ValueError("dual face not found")
    return G


def tangent_cone(P: LatticePolytope, F) -> RationalCone:
    """Cone generated by ``P - b`` for b in the relative interior of F, apex at a vertex of F."""
    if not isinstance(F, Face):
        v = _vec(F)
        F = P.face_of({P.vertex_index(v)})
    rows = [u for j, (u, c) in enumerate(P.inequalities) if j in F.inequality_indices]
    for u, c in P.equations:
        rows.append(u)
        rows.append(tuple(-x for x in u))
    apex = F.vertices[0]
    if not rows:
        return RationalCone((), identity(P.ambient_dim), apex, P.ambient_dim)
    return RationalCone.from_inequalities(rows, P.ambient_dim, apex)


def lattice_length(e) -> int:
    """Lattice length of a segment given as a 1-dim Face or a pair of endpoints."""
    if isinstance(e, Face):
        if e.dim != 1:
            raise ValueError("not an edge")
        a, b = e.vertices
    else:
        a, b = e
    if not (is_integral(a) and is_integral(b)):
        raise ValueError("segment endpoints are not lattice points")
    return vec_gcd([int(x) - int(y) for x, y in zip(a, b)])


def cayley_sum(Ps) -> LatticePolytope:
    """``conv(P_i x {e_i})`` in N ⊕ Z^r."""
    Ps = list(Ps)
    if not Ps:
        raise ValueError("cayley_sum of an empty list")
    n = Ps[0].ambient_dim
    r = len(Ps)
    pts = []
    for i, P in enumerate(Ps):
        if P.ambient_dim != n:
            raise DimensionMismatch("summands live in different lattices")
        e = tuple(int(i == j) for j in range(r))
        pts.extend(tuple(v) + e for v in P.vertices)
    return LatticePolytope.from_vertices(pts, n + r)


def lattice_points(P: LatticePolytope) -> list:
    """All lattice points of P in lexicographic order."""
    n = P.ambient_dim
    if n == 0:
        return [()]
    lo = [ceil(min(Fraction(v[i]) for v in P.vertices)) for i in range(n)]
    hi = [floor(max(Fraction(v[i]) for v in P.vertices)) for i in range(n)]
    if any(a > b for a, b in zip(lo, hi)):
        return []
    A, c = [], []
    for u, b in P.inequalities:
        A.append(list(u))
        c.append(ceil(Fraction(b)))
    for u, b in P.equations:
        if Fraction(b).denominator != 1:
            return []
        A.append(list(u))
        c.append(int(b))
        A.append([-x for x in u])
        c.append(-int(b))
    return [tuple(p) for p in kernels.box_points(lo, hi, A, c)]


def standard_simplex(k: int, scale: int = 1) -> LatticePolytope:
    """``scale * conv(0, e_1, ..., e_k)``."""
    pts = [(0,) * k] + [tuple(scale * int(i == j) for j in range(k)) for i in range(k)]
    return LatticePolytope.from_vertices(pts, k)


def product(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    return LatticePolytope.from_vertices([tuple(a) + tuple(b) for a in P.vertices for b in Q.vertices])


def affine_rank(points) -> int:
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    return rank([[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in pts[1:]]) if len(pts) > 1 else 0


def lattice_isomorphism(P: LatticePolytope, Q: LatticePolytope):
    """An affine unimodular map ``x -> A x + t`` sending P onto Q, or None.

    Both polytopes must be full-dimensional.  Tries every image of an affine
    basis of vertices of P, so it is meant for polytopes with few vertices.
    """
    n = P.ambient_dim
    if Q.ambient_dim != n or P.dim != n or Q.dim != n:
        raise ValueError("lattice_isomorphism needs full-dimensional polytopes of equal dimension")
    if P.f_vector() != Q.f_vector():
        return None
    basis = [P.vertices[0]]
    for v in P.vertices[1:]:
        if affine_rank(basis + [v]) == len(basis):
            basis.append(v)
            if len(basis) == n + 1:
                break
    v0 = basis[0]
    Vinv = inverse_rational(transpose([[a - b for a, b in zip(v, v0)] for v in basis[1:]]))
    target = set(Q.vertices)
    for ws in permutations(Q.vertices, n + 1):
        W = transpose([[a - b for a, b in zip(w, ws[0])] for w in ws[1:]])
        A = [[sum(Fraction(W[i][k]) * Vinv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if not all(x.denominator == 1 for r in A for x in r):
            continue
        A = tuple(tuple(int(x) for x in r) for r in A)
        if abs(det(A)) != 1:
            continue
        t = tuple(w - a for w, a in zip(ws[0], matvec(A, v0)))
        if {tuple(x + y for x, y in zip(matvec(A, v), t)) for v in P.vertices} == target:
            return A, t
    return None
