"""Cracked polytopes, reflexivity, facets of Cayley type and vertical faces."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CayleyStructureError, FanError
from .fan import Fan, ToricDivisor, _require_fano, is_nef, is_smooth_fan, polytope_of_sections, star_fan
from .lattice import complete_basis, dot, is_integral, kernel_basis, lattice_basis, saturation
from .polytope import (
    LatticePolytope,
    RationalCone,
    cayley_sum,
    is_unimodular_cone,
    polar_dual,
    tangent_cone,
)


@dataclass
class CrackReport:
    verdict: bool
    pieces: tuple  # (maximal cone as ray-index set, piece polytope)
    witness: Optional[tuple] = None  # (cone, vertex, tangent cone) of the first failure

    def __bool__(self):
        return self.verdict

    @property
    def n_pieces(self):
        return len(self.pieces)


def piece(P: LatticePolytope, fan: Fan, sigma) -> Optional[LatticePolytope]:
    """``P ∩ C`` for a maximal cone C, or None if it is not full-dimensional."""
    C = fan.cone(sigma)
    normals, eqs = C.facets()
    ineqs = list(P.inequalities) + [(a, 0) for a in normals]
    equations = list(P.equations) + [(e, 0) for e in eqs]
    Q = LatticePolytope.from_inequalities(ineqs, equations, P.ambient_dim)
    if Q.dim < P.ambient_dim:
        return None
    return Q


def is_cracked(P: LatticePolytope, fan: Fan) -> CrackReport:
    """Check unimodularity of the vertex tangent cones of every full-dimensional piece."""
    if not is_smooth_fan(fan):
        raise FanError("fan is not unimodular")
    pieces = []
    witness = None
    for sigma in fan.maximal_cones:
        Q = piece(P, fan, sigma)
        if Q is None:
            continue
        pieces.append((sigma, Q))
        if witness is not None:
            continue
        for v in Q.vertices:
            T = tangent_cone(Q, v)
            if not is_unimodular_cone(T):
                witness = (sigma, v, T)
                break
    return CrackReport(witness is None, tuple(pieces), witness)


def all_face_tangent_cones_unimodular(report: CrackReport) -> bool:
    """Unimodularity at every nonempty face of every piece (taken modulo lineality)."""
    for sigma, Q in report.pieces:
        for d, faces in Q.face_lattice().items():
            if d < 0:
                continue
            for F in faces:
                if not is_unimodular_cone(tangent_cone(Q, F), modulo_lineality=True):
                    return False
    return True


def check_reflexive(P: LatticePolytope) -> bool:
    _require_fano(P)
    return polar_dual(P).is_lattice


@dataclass
class CayleyFacetStructure:
    facet: object  # Face of P
    v: tuple  # dual vertex of P°
    cone: frozenset  # minimal cone of the fan containing v
    k: int
    b: tuple  # generators of the tangent cone of P° ∩ <C> at v
    eta: tuple  # rows completing b to a basis of M
    star: Fan  # star fan of C in eta-coordinates
    fibers: tuple  # fiber polytopes in eta-coordinates
    divisors: tuple  # nef divisors on the star fan with P_D = fiber
    certificate: dict = field(default_factory=dict)

    def project(self, x) -> tuple:
        return tuple(dot(b, x) for b in self.b)

    def fiber_index(self, x) -> Optional[int]:
        p = self.project(x)
        if sorted(p) == [0] * (self.k - 1) + [1]:
            return p.index(1)
        return None

    def eta_coordinates(self, x) -> tuple:
        return tuple(dot(e, x) for e in self.eta)


def facet_cayley_structure(P: LatticePolytope, fan: Fan, F, dual: Optional[LatticePolytope] = None) -> CayleyFacetStructure:
    """Exhibit the facet F of reflexive P as a Cayley sum over the minimal cone of F*."""
    dual = dual if dual is not None else polar_dual(P)
    (j,) = F.inequality_indices
    u, c = P.inequalities[j]
    v = tuple(Fraction(x) / -Fraction(c) for x in u)
    if not is_integral(v):
        raise CayleyStructureError("P is not reflexive", v)
    v = tuple(int(x) for x in v)
    C = fan.minimal_cone_containing(v)
    if C is None:
        raise CayleyStructureError("dual vertex outside the fan support", v)
    n = P.ambient_dim
    span = [fan.rays[i] for i in sorted(C)] + list(fan.lineality)
    span_basis = lattice_basis(saturation(span, n)) if span else ()
    k = len(span_basis)
    # tangent cone of P° ∩ <C> at v
    tight = [w for w in P.vertices if dot(w, v) == -1]
    rows = [tuple(w) for w in tight]
    ann = kernel_basis(span_basis, n) if span_basis else [tuple(int(i == t) for t in range(n)) for i in range(n)]
    for a in ann:
        rows.append(tuple(a))
        rows.append(tuple(-x for x in a))
    if k == 0:
        raise CayleyStructureError("dual vertex is the origin", v)
    T = RationalCone.from_inequalities(rows, n)
    b = T.rays
    if len(b) != k or T.lineality or not is_unimodular_cone(T):
        raise CayleyStructureError("tangent cone of P° ∩ <C> is not unimodular", v)
    if tuple(sum(x) for x in zip(*b)) != tuple(-x for x in v):
        raise CayleyStructureError("generators do not sum to -v", v)
    try:
        full = complete_basis(b, n)
    except ValueError:
        raise CayleyStructureError("generators do not extend to a basis", v)
    eta = tuple(full[k:])
    vertsF = F.vertices
    proj = [tuple(dot(bi, x) for bi in b) for x in vertsF]
    groups = [[] for _ in range(k)]
    for x, p in zip(vertsF, proj):
        if sorted(p) != [0] * (k - 1) + [1]:
            raise CayleyStructureError("facet vertex does not project to a simplex vertex", x)
        groups[p.index(1)].append(tuple(dot(e, x) for e in eta))
    if any(not g for g in groups):
        raise CayleyStructureError("projection misses a simplex vertex", v)
    star = star_fan(fan, C, full)
    fibers, divisors = [], []
    for jdx, g in enumerate(groups):
        Fj = LatticePolytope.from_vertices(g, n - k)
        coeffs = [-min(dot(r, y) for y in Fj.vertices) for r in star.rays]
        D = ToricDivisor(star, coeffs)
        if star.rays and not is_nef(D):
            raise CayleyStructureError("fiber divisor is not nef", jdx)
        PD = polytope_of_sections(D) if star.rays else LatticePolytope([()], [], [], 0)
        if PD != Fj:
            raise CayleyStructureError("fiber is not the section polytope of its divisor", jdx)
        fibers.append(Fj)
        divisors.append(D)
    image = LatticePolytope.from_vertices(
        [tuple(dot(e, x) for e in eta) + tuple(dot(bi, x) for bi in b) for x in vertsF], n
    )
    if image != cayley_sum(fibers):
        raise CayleyStructureError("Cayley sum of fibers differs from the facet", v)
    cert = {"map": tuple(eta) + tuple(b)}
    return CayleyFacetStructure(F, v, C, k, tuple(b), eta, star, tuple(fibers), tuple(divisors), cert)


def cayley_structures(P: LatticePolytope, fan: Fan) -> dict:
    """Cayley structure of every facet, keyed by inequality index."""
    dual = polar_dual(P)
    out = {}
    for F in P.facets():
        (j,) = F.inequality_indices
        out[j] = facet_cayley_structure(P, fan, F, dual)
    return out


def vertical_faces(P: LatticePolytope, fan: Fan, structures=None) -> list:
    """Faces of positive dimension mapped to a single simplex vertex by every facet projection."""
    structures = structures if structures is not None else cayley_structures(P, fan)
    out = []
    L = P.face_lattice()
    for d in sorted(L):
        if d < 1 or d > P.dim - 1:
            continue
        for E in L[d]:
            ok = True
            for j in E.inequality_indices:
                S = structures[j]
                labels = {S.fiber_index(x) for x in E.vertices}
                if len(labels) != 1:
                    ok = False
                    break
            if ok:
                out.append(E)
    return out
