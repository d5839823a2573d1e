"""Scaffoldings: shapes, struts, validation, fullness, and two constructions."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

from .cracked import is_cracked, vertical_faces
from .errors import FanError, ScaffoldingError, UnsupportedShapeError
from .fan import (
    Fan,
    ToricDivisor,
    is_complete_fan,
    is_nef,
    is_smooth_fan,
    polytope_of_sections,
    product_projective_fan,
    product_structure,
    pullback_fan,
    vertex_candidate,
)
from .lattice import LatticeSplitting, dot, primitive_vector
from .polytope import LatticePolytope, lattice_points, polar_dual


class Shape:
    """A shape fan on ``M̄ = Z^d`` together with a splitting ``N = N̄ ⊕ N_U``.

    ``cracking_fan`` is the pullback of the shape fan to ``M``; its minimal
    cone is the annihilator of N̄.
    """

    def __init__(self, fan: Fan, splitting: Optional[LatticeSplitting] = None, constructed: bool = True):
        if splitting is None:
            splitting = LatticeSplitting.trivial(fan.ambient_dim)
        if splitting.dim_nbar != fan.ambient_dim:
            raise ValueError("shape fan rank differs from rank of N̄")
        if not is_smooth_fan(fan) or not is_complete_fan(fan):
            raise FanError("shape fan must be smooth and complete")
        if not constructed:
            warnings.warn("projectivity of a user-supplied shape fan is not verified", stacklevel=2)
        self.fan = fan
        self.splitting = splitting
        self.constructed = constructed
        self._cracking = None

    @classmethod
    def projective(cls, ks, splitting: Optional[LatticeSplitting] = None) -> "Shape":
        return cls(product_projective_fan(ks), splitting)

    @classmethod
    def p1(cls, u) -> "Shape":
        """Shape P^1 with N̄ spanned by the primitive vector u."""
        return cls(product_projective_fan([1]), LatticeSplitting.from_nbar([primitive_vector(u)]))

    @property
    def n(self):
        return self.splitting.rank

    @property
    def d(self):
        return self.fan.ambient_dim

    @property
    def n_u(self):
        return self.splitting.dim_nu

    @property
    def ell(self):
        return self.fan.n_rays

    @property
    def cracking_fan(self) -> Fan:
        if self._cracking is None:
            self._cracking = pullback_fan(self.fan, self.splitting.matrix)
        return self._cracking

    def to_n(self, xbar, chi) -> tuple:
        return self.splitting.join(xbar, chi)

    def split(self, x):
        return self.splitting.split(x)

    def __repr__(self):
        return f"Shape(rays={list(self.fan.rays)}, nbar={list(self.splitting.nbar)}, nu={list(self.splitting.nu)})"


@dataclass(frozen=True)
class Strut:
    D: ToricDivisor
    chi: tuple = ()

    def polytope_nbar(self) -> LatticePolytope:
        return polytope_of_sections(self.D)

    def polytope(self, shape: Shape) -> LatticePolytope:
        """``P_D + chi`` inside N."""
        PD = self.polytope_nbar()
        return LatticePolytope.from_vertices([shape.to_n(x, self.chi) for x in PD.vertices], shape.n)

    def rho(self) -> tuple:
        """``rho_s = (-D, chi)`` in Z^ℓ ⊕ N_U."""
        return tuple(-a for a in self.D.coeffs) + tuple(self.chi)

    def vertex_for(self, sigma) -> tuple:
        """``u^D``: the vertex of P_D minimizing over the maximal cone sigma."""
        return tuple(vertex_candidate(self.D, sigma))

    def __repr__(self):
        return f"Strut(D={list(self.D.coeffs)}, chi={tuple(self.chi)})"


@dataclass
class Scaffolding:
    P: LatticePolytope
    shape: Shape
    struts: tuple
    validated: bool = False
    _polys: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        self.struts = tuple(self.struts)

    def strut_polytopes(self) -> tuple:
        if self._polys is None:
            self._polys = tuple(s.polytope(self.shape) for s in self.struts)
        return self._polys

    def covering(self, x) -> list:
        return [k for k, Q in enumerate(self.strut_polytopes()) if Q.contains(x)]


def validate_scaffolding(S: Scaffolding) -> Scaffolding:
    """Check nefness, containment, convex hull and unique vertex cover."""
    for k, s in enumerate(S.struts):
        if s.D.fan is not S.shape.fan and s.D.fan != S.shape.fan:
            raise ScaffoldingError("WrongFan", "strut divisor lives on another fan", k)
        if len(s.chi) != S.shape.n_u:
            raise ScaffoldingError("BadOffset", "offset has the wrong rank", k)
        if not is_nef(s.D):
            raise ScaffoldingError("NotNef", f"strut {k} divisor is not nef", k)
    try:
        polys = S.strut_polytopes()
    except Exception as exc:
        raise ScaffoldingError("EmptyStrut", str(exc), None)
    for k, Q in enumerate(polys):
        if not S.P.contains_polytope(Q):
            raise ScaffoldingError("StrutNotContained", f"strut {k} leaves P", k)
    hull = LatticePolytope.from_vertices([v for Q in polys for v in Q.vertices], S.P.ambient_dim)
    if hull != S.P:
        missing = next((v for v in S.P.vertices if not hull.contains(v)), None)
        raise ScaffoldingError("HullMismatch", "struts do not span P", missing)
    for v in S.P.vertices:
        cov = [k for k, Q in enumerate(polys) if Q.contains(v)]
        if len(cov) != 1:
            raise ScaffoldingError("UniqueVertexCover", f"vertex {v} lies in struts {cov}", v)
    S.validated = True
    return S


@dataclass
class FullnessReport:
    verdict: bool
    vertical: tuple  # vertical faces
    covering: tuple  # per vertical face, indices of struts containing it
    uncovered: tuple

    def __bool__(self):
        return self.verdict


def is_full(S: Scaffolding, structures=None) -> FullnessReport:
    """Every vertical face of P lies in a strut polytope."""
    fan = S.shape.cracking_fan
    V = vertical_faces(S.P, fan, structures)
    polys = S.strut_polytopes()
    cov, unc = [], []
    for E in V:
        ks = tuple(k for k, Q in enumerate(polys) if all(Q.contains(x) for x in E.vertices))
        cov.append(ks)
        if not ks:
            unc.append(E)
    return FullnessReport(not unc, tuple(V), tuple(cov), tuple(unc))


def strut_from_polytope(shape: Shape, Q: LatticePolytope) -> Strut:
    """The unique strut (D, chi) with P_D + chi = Q, or ScaffoldingError."""
    pts = [shape.split(v) for v in Q.vertices]
    chis = {c for _, c in pts}
    if len(chis) != 1:
        raise ScaffoldingError("NotAStrut", "polytope is not parallel to N̄", None)
    (chi,) = chis
    coeffs = [-min(dot(r, xb) for xb, _ in pts) for r in shape.fan.rays]
    D = ToricDivisor(shape.fan, coeffs)
    s = Strut(D, tuple(chi))
    if s.polytope(shape) != Q or not is_nef(D):
        raise ScaffoldingError("NotAStrut", "polytope is not a nef section polytope", None)
    return s


def scaffold_shape_p1(P: LatticePolytope, shape: Shape, require_cracked: bool = True) -> Scaffolding:
    """Full scaffolding for a P^1 shape: one strut per vertical edge, one point strut per other vertex.

    With ``require_cracked=False`` a polar that is not cracked is accepted and
    the vertical edges are taken to be the edges of P parallel to N̄.
    """
    if shape.d != 1 or shape.fan.n_rays != 2:
        raise UnsupportedShapeError("shape is not P^1")
    fan = shape.cracking_fan
    dual = polar_dual(P)
    if is_cracked(dual, fan).verdict:
        edges = vertical_faces(P, fan)
    elif require_cracked:
        raise ScaffoldingError("NotCracked", "the polar polytope is not cracked along the shape fan", None)
    else:
        edges = [E for E in P.edges() if all(not any(shape.split(b)[1][j] - shape.split(a)[1][j] for j in range(shape.n_u)) for a, b in [E.vertices])]
    plus = 0 if shape.fan.rays[0] == (1,) else 1
    minus = 1 - plus
    struts = []
    covered = set()
    for E in edges:
        if E.dim != 1:
            raise ScaffoldingError("VerticalFace", "vertical face of dimension > 1 for a P^1 shape", E)
        a, b = E.vertices
        (ta,), chia = shape.split(a)
        (tb,), chib = shape.split(b)
        if chia != chib:
            raise ScaffoldingError("VerticalFace", "vertical edge is not parallel to N̄", E)
        t0, L = min(ta, tb), abs(ta - tb)
        coeffs = [0, 0]
        coeffs[plus] = -t0
        coeffs[minus] = t0 + L
        struts.append(Strut(ToricDivisor(shape.fan, coeffs), tuple(chia)))
        covered |= {a, b}
    for w in P.vertices:
        if w in covered:
            continue
        (t,), chi = shape.split(w)
        coeffs = [0, 0]
        coeffs[plus] = -t
        coeffs[minus] = t
        struts.append(Strut(ToricDivisor(shape.fan, coeffs), tuple(chi)))
    S = Scaffolding(P, shape, struts)
    return validate_scaffolding(S)


# exhaustive search ------------------------------------------------------

@dataclass
class SearchCertificate:
    vertical: tuple  # vertical faces as tuples of P-vertex indices
    groups: tuple  # vertex groups forced together by vertical faces
    n_candidates: int
    signatures: tuple  # admissible signatures (sorted vertex-index tuples)
    face_candidates: tuple  # per vertical face, admissible signatures containing it
    faces_without_candidate: tuple
    nodes: int
    found: bool


@dataclass
class _Cand:
    degree: tuple
    translation: tuple
    polytope: LatticePolytope
    signature: tuple


def _base_polytope(shape: Shape, groups, degree):
    coeffs = [0] * shape.fan.n_rays
    for g, d in zip(groups, degree):
        coeffs[g[0]] = d
    D = ToricDivisor(shape.fan, coeffs)
    PD = polytope_of_sections(D)
    return [shape.to_n(x, (0,) * shape.n_u) for x in PD.vertices]


def _translations(P: LatticePolytope, verts):
    """Lattice t with t + verts ⊆ P."""
    ineqs = [(u, c - min(dot(u, w) for w in verts)) for u, c in P.inequalities]
    eqs = [(u, c - dot(u, verts[0])) for u, c in P.equations]
    try:
        T = LatticePolytope.from_inequalities(ineqs, eqs, P.ambient_dim)
    except Exception:
        return []
    return lattice_points(T)


def candidate_struts(P: LatticePolytope, shape: Shape):
    """All ``P_D + chi ⊆ P`` for nef D, as (degree, translation, polytope, vertex signature)."""
    groups = product_structure(shape.fan)
    if groups is None:
        raise UnsupportedShapeError("Unsupported: shape is not a product of projective spaces")
    r = len(groups)
    Vidx = {v: i for i, v in enumerate(P.vertices)}
    out = []
    feasible = set()
    frontier = [(0,) * r]
    seen = set(frontier)
    while frontier:
        nxt = []
        for deg in frontier:
            if any(deg[i] > 0 and tuple(d - (j == i) for j, d in enumerate(deg)) not in feasible for i in range(r)):
                continue
            base = _base_polytope(shape, groups, deg)
            ts = _translations(P, base)
            if not ts:
                continue
            feasible.add(deg)
            for t in ts:
                pts = [tuple(a + b for a, b in zip(w, t)) for w in base]
                Q = LatticePolytope.from_vertices(pts, P.ambient_dim)
                sig = tuple(sorted(Vidx[v] for v in P.vertices if Q.contains(v)))
                out.append(_Cand(deg, tuple(t), Q, sig))
            for i in range(r):
                nd = tuple(d + (j == i) for j, d in enumerate(deg))
                if nd not in seen:
                    seen.add(nd)
                    nxt.append(nd)
        frontier = sorted(nxt)
    return groups, out


def _exact_cover(universe, rows):
    """Lexicographically least exact cover of ``universe`` by ``rows`` (sorted tuples), or None."""
    by_elem = {e: [] for e in universe}
    for r in sorted(rows):
        for e in r:
            by_elem[e].append(r)
    nodes = 0
    chosen = []

    def search(remaining):
        nonlocal nodes
        nodes += 1
        if not remaining:
            return True
        e = min(remaining)
        for r in by_elem[e]:
            if set(r) <= remaining:
                chosen.append(r)
                if search(remaining - set(r)):
                    return True
                chosen.pop()
        return False

    ok = search(frozenset(universe))
    return (tuple(chosen) if ok else None), nodes


def search_full_scaffolding(P: LatticePolytope, shape: Shape):
    """Exhaustive search for a full scaffolding over a product of projective spaces.

    Returns ``(scaffolding or None, SearchCertificate)``.
    """
    fan = shape.cracking_fan
    groups_shape, cands = candidate_struts(P, shape)
    V = vertical_faces(P, fan)
    Vidx = {v: i for i, v in enumerate(P.vertices)}
    vfaces = [tuple(sorted(Vidx[x] for x in E.vertices)) for E in V]
    parent = list(range(len(P.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in vfaces:
        for x in f[1:]:
            ra, rb = find(f[0]), find(x)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for i in range(len(P.vertices)):
        groups.setdefault(find(i), []).append(i)
    group_of = {i: find(i) for i in range(len(P.vertices))}
    best = {}
    for c in cands:
        if not c.signature:
            continue
        if any(set(groups[group_of[i]]) - set(c.signature) for i in c.signature):
            continue
        key = c.signature
        if key not in best or (c.degree, c.translation) < (best[key].degree, best[key].translation):
            best[key] = c
    sigs = tuple(sorted(best))
    face_cands = tuple(tuple(s for s in sigs if set(f) <= set(s)) for f in vfaces)
    without = tuple(f for f, fc in zip(vfaces, face_cands) if not fc)
    cover, nodes = _exact_cover(range(len(P.vertices)), sigs)
    cert = SearchCertificate(
        tuple(vfaces),
        tuple(tuple(g) for g in sorted(groups.values())),
        len(cands),
        sigs,
        face_cands,
        without,
        nodes,
        cover is not None,
    )
    if cover is None:
        return None, cert
    struts = [strut_from_polytope(shape, best[s].polytope) for s in cover]
    S = validate_scaffolding(Scaffolding(P, shape, struts))
    return S, cert


def brute_force_cover_exists(n_vertices, signatures) -> bool:
    """Independent check used by tests: try every subset of signatures."""
    sigs = list(signatures)
    target = frozenset(range(n_vertices))
    for mask in range(1, 1 << len(sigs)):
        seen = set()
        ok = True
        for i, s in enumerate(sigs):
            if mask >> i & 1:
                if seen & set(s):
                    ok = False
                    break
                seen |= set(s)
        if ok and seen == target:
            return True
    return False
