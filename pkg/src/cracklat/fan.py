"""Fans, toric divisors and their combinatorics.

A fan stores primitive ray generators, its maximal cones as frozensets of
ray indices, and an optional lineality (minimal cone) basis.  Cones are
realized as :class:`RationalCone` on demand.  Divisor coefficients follow the
convention ``P_D = {m : <m, v_rho> >= -a_rho}``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Optional

from .errors import FanError, NotFanoError
from .lattice import (
    as_matrix,
    complete_basis,
    dot,
    identity,
    inverse_rational,
    inverse_unimodular,
    is_integral,
    lattice_basis,
    matvec,
    normalize,
    primitive_vector,
    rank,
    saturation,
    smith_normal_form,
    solve_integral,
    solve_rational,
    transpose,
    vec_gcd,
)
from .polytope import LatticePolytope, RationalCone, is_unimodular_cone, lattice_points


class Fan:
    def __init__(self, rays, cones, lineality=(), ambient_dim=None, ray_labels=None):
        self.rays = tuple(tuple(int(x) for x in r) for r in rays)
        self.lineality = tuple(tuple(int(x) for x in r) for r in lineality)
        if ambient_dim is None:
            ambient_dim = len((self.rays + self.lineality)[0])
        self.ambient_dim = ambient_dim
        self.maximal_cones = tuple(sorted((frozenset(c) for c in cones), key=lambda c: sorted(c)))
        self.ray_labels = tuple(ray_labels) if ray_labels is not None else None
        self._cones = {}
        self._all = None
        self._faces = {}

    def __repr__(self):
        return f"Fan(rays={list(self.rays)}, cones={[sorted(c) for c in self.maximal_cones]})"

    @property
    def n_rays(self):
        return len(self.rays)

    @property
    def rank(self):
        """Dimension of the quotient by the minimal cone."""
        return self.ambient_dim - len(self.lineality)

    def cone(self, idx) -> RationalCone:
        idx = frozenset(idx)
        if idx not in self._cones:
            self._cones[idx] = RationalCone.from_generators(
                [self.rays[i] for i in sorted(idx)], self.lineality, self.ambient_dim
            )
        return self._cones[idx]

    def cone_rays(self, idx):
        return [self.rays[i] for i in sorted(idx)]

    @property
    def is_simplicial(self):
        return all(self.cone(c).is_simplicial and len(c) == len(self.cone(c).rays) for c in self.maximal_cones)

    def faces_of(self, sigma) -> frozenset:
        """All faces of the cone ``sigma`` as frozensets of ray indices (including the empty one)."""
        sigma = frozenset(sigma)
        if sigma in self._faces:
            return self._faces[sigma]
        C = self.cone(sigma)
        normals, _ = C.facets()
        facet_sets = []
        for a in normals:
            s = frozenset(i for i in sigma if dot(a, self.rays[i]) == 0)
            facet_sets.append(s)
        out = {sigma}
        frontier = {sigma}
        while frontier:
            nxt = set()
            for F in frontier:
                for s in facet_sets:
                    G = F & s
                    if G != F and G not in out:
                        nxt.add(G)
            out |= nxt
            frontier = nxt
        out.add(frozenset())
        self._faces[sigma] = frozenset(out)
        return self._faces[sigma]

    def all_cones(self) -> frozenset:
        if self._all is None:
            s = set()
            for c in self.maximal_cones:
                s |= self.faces_of(c)
            self._all = frozenset(s)
        return self._all

    def cones_of_dim(self, k) -> list:
        """Cones whose dimension modulo the minimal cone is k."""
        out = []
        for c in self.all_cones():
            if self.cone_dim(c) == k:
                out.append(c)
        return sorted(out, key=lambda c: sorted(c))

    def cone_dim(self, idx) -> int:
        if not idx:
            return 0
        return rank([self.rays[i] for i in idx] + list(self.lineality)) - len(self.lineality)

    def walls(self):
        """Pairs ``(i, j, tau)`` of maximal cones meeting in a common codimension-one face."""
        return _memo(self, "walls", self._walls)

    def _walls(self):
        out = []
        facets = {}
        for k, c in enumerate(self.maximal_cones):
            for f in self.faces_of(c):
                if self.cone_dim(f) == self.rank - 1:
                    facets.setdefault(f, []).append(k)
        for f, ks in sorted(facets.items(), key=lambda t: sorted(t[0])):
            for i, j in combinations(ks, 2):
                out.append((i, j, f))
        return out

    def minimal_cone_containing(self, x) -> Optional[frozenset]:
        """Ray-index set of the smallest cone containing x, or None if x is outside the support."""
        best = None
        for c in self.maximal_cones:
            C = self.cone(c)
            if not C.contains(x):
                continue
            normals, _ = C.facets()
            face = frozenset(c)
            for a in normals:
                if dot(a, x) == 0:
                    face = face & frozenset(i for i in c if dot(a, self.rays[i]) == 0)
            if best is None or len(face) < len(best):
                best = face
        return best

    def maximal_cones_containing(self, x) -> list:
        return [c for c in self.maximal_cones if self.cone(c).contains(x)]

    def validate(self):
        """Check that maximal cones meet in common faces; raise FanError otherwise."""
        cones = self.maximal_cones
        for a, b in combinations(cones, 2):
            Ca, Cb = self.cone(a), self.cone(b)
            na, _ = Ca.facets()
            nb, _ = Cb.facets()
            eqs = []
            for e in list(Ca.facets()[1]) + list(Cb.facets()[1]):
                eqs.append(e)
                eqs.append(tuple(-x for x in e))
            inter = RationalCone.from_inequalities(list(na) + list(nb) + eqs, self.ambient_dim)
            common = a & b
            if common not in self.faces_of(a) or common not in self.faces_of(b):
                raise FanError(f"cones {sorted(a)} and {sorted(b)} do not meet in a common face")
            if not inter.same_cone(self.cone(common)):
                raise FanError(f"cones {sorted(a)} and {sorted(b)} overlap improperly")
        return self

    def key(self):
        return (
            self.ambient_dim,
            tuple(sorted(self.rays)),
            tuple(sorted(tuple(sorted(self.rays[i] for i in c)) for c in self.maximal_cones)),
            lattice_basis(self.lineality) if self.lineality else (),
        )

    def __eq__(self, other):
        return isinstance(other, Fan) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def ray_index(self, r) -> int:
        return self.rays.index(tuple(r))


class ToricDivisor:
    """Integer coefficient per ray of a fan."""

    def __init__(self, fan: Fan, coeffs):
        coeffs = tuple(int(a) for a in coeffs)
        if len(coeffs) != fan.n_rays:
            raise ValueError(f"expected {fan.n_rays} coefficients, got {len(coeffs)}")
        self.fan = fan
        self.coeffs = coeffs

    def __repr__(self):
        return f"ToricDivisor({list(self.coeffs)})"

    def __add__(self, other):
        return ToricDivisor(self.fan, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, k):
        return ToricDivisor(self.fan, [k * a for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ToricDivisor) and self.fan is other.fan and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def polytope(self) -> LatticePolytope:
        return polytope_of_sections(self)


# constructions ----------------------------------------------------------

def spanning_fan(P: LatticePolytope) -> Fan:
    """Fan of cones over the faces of a Fano polytope."""
    _require_fano(P)
    cones = [F.vertex_indices for F in P.facets()]
    return Fan(P.vertices, cones, (), P.ambient_dim)


def _require_fano(P):
    if not P.is_full_dimensional or any(c >= 0 for u, c in P.inequalities):
        raise NotFanoError("origin is not an interior point")
    for v in P.vertices:
        if not is_integral(v) or vec_gcd(v) != 1:
            raise NotFanoError(f"vertex {v} is not a primitive lattice point")


def normal_fan(P: LatticePolytope) -> Fan:
    """Inner normal fan; maximal cones correspond to vertices of P."""
    if not P.is_full_dimensional:
        raise FanError("normal fan needs a full-dimensional polytope")
    rays = [u for u, c in P.inequalities]
    cones = []
    for i, v in enumerate(P.vertices):
        cones.append(frozenset(j for j, (u, c) in enumerate(P.inequalities) if dot(u, v) == c))
    return Fan(rays, cones, (), P.ambient_dim)


def product_projective_fan(ks) -> Fan:
    """Fan of P^{k_1} x ... x P^{k_r}; ray (i, j) is e_j for j < k_i and -sum e for j = k_i."""
    ks = list(ks)
    if any(k < 1 for k in ks):
        raise ValueError("each k_i must be at least 1")
    n = sum(ks)
    rays, labels, groups = [], [], []
    off = 0
    for i, k in enumerate(ks):
        g = []
        for j in range(k + 1):
            v = [0] * n
            if j < k:
                v[off + j] = 1
            else:
                for t in range(k):
                    v[off + t] = -1
            g.append(len(rays))
            rays.append(tuple(v))
            labels.append((i, j))
        groups.append(g)
        off += k
    cones = []
    for omit in product(*groups):
        cones.append(frozenset(range(len(rays))) - frozenset(omit))
    F = Fan(rays, cones, (), n, labels)
    return F


def pullback_fan(shape: Fan, matrix) -> Fan:
    """Pull a fan on Z^d back to Z^n along ``m -> (first d coordinates of matrix^T m)``.

    ``matrix`` is an n x n unimodular matrix ``B``; the result has rays
    ``B^{-T} (rho, 0)`` and lineality ``B^{-T}(0, e_j)``.
    """
    B = as_matrix(matrix)
    n = len(B)
    d = shape.ambient_dim
    Binv_T = transpose(inverse_unimodular(B))
    rays = [matvec(Binv_T, tuple(r) + (0,) * (n - d)) for r in shape.rays]
    lin = [matvec(Binv_T, (0,) * d + tuple(int(i == j) for j in range(n - d))) for i in range(n - d)]
    lin = lattice_basis(saturation(lin, n)) if lin else ()
    return Fan(rays, shape.maximal_cones, lin, n, shape.ray_labels)


def quotient_fan(fan: Fan, basis=None) -> Fan:
    """Quotient by the minimal cone.

    ``basis`` optionally gives rows ``K`` of an integer matrix whose kernel
    on ``Z^n`` is the lineality lattice and which maps onto the quotient; by
    default one is derived from a basis completion.
    """
    if not fan.lineality:
        return fan
    n = fan.ambient_dim
    L = lattice_basis(saturation(fan.lineality, n))
    if basis is None:
        B = transpose(complete_basis(L, n))  # columns: L then K
        Binv = inverse_unimodular(B)
        basis = Binv[len(L):]
    basis = as_matrix(basis)
    remap = []
    for r in fan.rays:
        img = matvec(basis, r)
        if not any(img):
            raise FanError("ray lies in the minimal cone")
        remap.append(primitive_vector(img))
    Q = Fan(remap, fan.maximal_cones, (), len(basis), fan.ray_labels)
    Q.validate()
    return Q


def star_fan(fan: Fan, tau, span_basis=None) -> Fan:
    """Fan of the orbit closure V(tau), in coordinates of ``Z^n / span(tau)``.

    ``span_basis`` optionally fixes the unimodular basis (rows) used: its
    first ``dim span(tau)`` rows must span tau's saturated span.  The
    returned fan records ``ray_origin`` (indices of the rays of ``fan``),
    ``quotient_rows`` (rows mapping Z^n onto the quotient) and ``dual_rows``
    (rows K with ``y_j = <K_j, m>`` giving Ann(tau) coordinates of m).
    """
    tau = frozenset(tau)
    if tau not in fan.all_cones():
        raise FanError(f"{sorted(tau)} is not a cone of the fan")
    n = fan.ambient_dim
    gens = [fan.rays[i] for i in sorted(tau)] + list(fan.lineality)
    T = lattice_basis(saturation(gens, n)) if gens else ()
    r = len(T)
    if span_basis is not None:
        B = transpose(as_matrix(span_basis))
    else:
        B = transpose(complete_basis(T, n)) if T else identity(n)
    Binv = inverse_unimodular(B)
    qrows = Binv[r:]
    dual_rows = tuple(tuple(B[i][j] for i in range(n)) for j in range(r, n))
    star_rays, origin, pos = [], [], {}
    cones = []
    for c in fan.maximal_cones:
        if tau not in fan.faces_of(c):
            continue
        newc = []
        for i in sorted(c - tau):
            if i not in pos:
                img = matvec(qrows, fan.rays[i])
                pos[i] = len(star_rays)
                star_rays.append(primitive_vector(img))
                origin.append(i)
            newc.append(pos[i])
        cones.append(newc)
    labels = [fan.ray_labels[i] for i in origin] if fan.ray_labels else None
    S = Fan(star_rays, cones, (), n - r, labels)
    S.ray_origin = tuple(origin)
    S.quotient_rows = tuple(qrows)
    S.dual_rows = dual_rows
    S.parent = fan
    S.tau = tau
    return S


# properties -------------------------------------------------------------

def is_smooth_fan(fan: Fan) -> bool:
    return all(is_unimodular_cone(fan.cone(c), modulo_lineality=True) for c in fan.maximal_cones)


def is_complete_fan(fan: Fan) -> bool:
    if not fan.maximal_cones:
        return fan.rank == 0
    if any(fan.cone_dim(c) != fan.rank for c in fan.maximal_cones):
        return False
    if fan.rank == 0:
        return True
    count = {}
    for k, c in enumerate(fan.maximal_cones):
        for f in fan.faces_of(c):
            if fan.cone_dim(f) == fan.rank - 1:
                count.setdefault(f, []).append(k)
    if any(len(v) != 2 for v in count.values()):
        return False
    adj = {k: set() for k in range(len(fan.maximal_cones))}
    for ks in count.values():
        adj[ks[0]].add(ks[1])
        adj[ks[1]].add(ks[0])
    seen, stack = {0}, [0]
    while stack:
        k = stack.pop()
        for j in adj[k] - seen:
            seen.add(j)
            stack.append(j)
    return len(seen) == len(fan.maximal_cones)


def _memo(fan, key, fn):
    d = fan.__dict__.setdefault("_memo", {})
    if key not in d:
        d[key] = fn()
    return d[key]


def _require_smooth_complete(fan):
    if fan.lineality:
        raise FanError("expected a fan with trivial minimal cone")
    if not _memo(fan, "smooth_complete", lambda: is_smooth_fan(fan) and is_complete_fan(fan)):
        raise FanError("expected a smooth complete fan")


def polytope_of_sections(D: ToricDivisor) -> LatticePolytope:
    """``P_D = {m : <m, v_rho> >= -a_rho}`` (raises EmptyPolytopeError if empty)."""
    fan = D.fan
    ineqs = [(r, -a) for r, a in zip(fan.rays, D.coeffs)]
    eqs = [(l, 0) for l in fan.lineality]
    return LatticePolytope.from_inequalities(ineqs, eqs, fan.ambient_dim)


def vertex_candidate(D: ToricDivisor, sigma):
    """The m with ``<m, v_rho> = -a_rho`` for rho in a maximal smooth cone sigma."""
    fan = D.fan
    idx = sorted(sigma)
    A = [fan.rays[i] for i in idx] + list(fan.lineality)
    b = [-D.coeffs[i] for i in idx] + [0] * len(fan.lineality)
    if len(A) == fan.ambient_dim:
        inv = _memo(fan, ("inv", frozenset(sigma)), lambda: _try_inverse(A))
        if inv is not None:
            return tuple(normalize(sum(r * x for r, x in zip(row, b))) for row in inv)
    m = solve_integral(A, b)
    if m is None:
        m = solve_rational(A, b)
    return m


def _try_inverse(A):
    try:
        return inverse_rational(A)
    except ValueError:
        return None


def is_nef(D: ToricDivisor, method: str = "vertices") -> bool:
    """Nefness on a smooth complete fan.

    ``method`` is ``"vertices"`` (m_sigma in P_D), ``"walls"`` (convexity
    across every wall) or ``"intersections"`` (non-negative degree on every
    torus-invariant curve).
    """
    fan = D.fan
    _require_smooth_complete(fan)
    a = D.coeffs
    if method == "vertices":
        for c in fan.maximal_cones:
            m = vertex_candidate(D, c)
            if any(dot(m, r) < -ai for r, ai in zip(fan.rays, a)):
                return False
        return True
    if method == "walls":
        for i, j, tau in fan.walls():
            m = vertex_candidate(D, fan.maximal_cones[i])
            (k,) = fan.maximal_cones[j] - tau
            if dot(m, fan.rays[k]) < -a[k]:
                return False
        return True
    if method == "intersections":
        for i, j, tau in fan.walls():
            if intersection_number(D, tau) < 0:
                return False
        return True
    raise ValueError(f"unknown method {method!r}")


def wall_relation(fan: Fan, tau):
    """For a wall tau of a smooth fan: ``(rho, rho', {i: b_i})`` with v_rho + v_rho' + sum b_i v_i = 0."""
    tau = frozenset(tau)
    return _memo(fan, ("wall", tau), lambda: _wall_relation(fan, tau))


def _wall_relation(fan, tau):
    sides = [c for c in fan.maximal_cones if tau <= c]
    if len(sides) != 2:
        raise FanError("not an interior wall")
    (p,) = sides[0] - tau
    (q,) = sides[1] - tau
    idx = sorted(tau)
    s = tuple(-(x + y) for x, y in zip(fan.rays[p], fan.rays[q]))
    if not idx:
        if any(s):
            raise FanError("wall relation is not integral")
        return p, q, {}
    b = solve_integral(transpose([fan.rays[i] for i in idx]), s)
    if b is None:
        raise FanError("wall relation is not integral")
    return p, q, dict(zip(idx, b))


def intersection_number(D: ToricDivisor, tau) -> int:
    """``D . V(tau)`` for a wall tau of a smooth complete fan."""
    p, q, b = wall_relation(D.fan, tau)
    a = D.coeffs
    return a[p] + a[q] + sum(bi * a[i] for i, bi in b.items())


def restricted_sections(fan: Fan, D: ToricDivisor, tau):
    """Sections of D that survive on V(tau).

    Returns ``(points, induced, star)``: the lattice points of P_D with
    equality on every ray of tau, written in Ann(tau) coordinates after
    subtracting a base point m0; the induced divisor on the star fan; and the
    star fan itself.
    """
    tau = frozenset(tau)
    star = star_fan(fan, tau)
    idx = sorted(tau)
    A = [fan.rays[i] for i in idx] + list(fan.lineality)
    b = [-D.coeffs[i] for i in idx] + [0] * len(fan.lineality)
    m0 = solve_integral(A, b) if A else (0,) * fan.ambient_dim
    if m0 is None:
        raise FanError("no integral base point for the restriction")
    for k, i in enumerate(star.ray_origin):
        img = matvec(star.quotient_rows, fan.rays[i])
        if vec_gcd(img) != 1:
            raise FanError("star fan ray image is not primitive")
    induced = ToricDivisor(star, [D.coeffs[i] + dot(m0, fan.rays[i]) for i in star.ray_origin])
    try:
        PD = polytope_of_sections(D)
    except Exception:
        return [], induced, star
    pts = []
    for m in lattice_points(PD):
        if all(dot(m, fan.rays[i]) == -D.coeffs[i] for i in idx):
            diff = tuple(x - y for x, y in zip(m, m0))
            pts.append(tuple(dot(k, diff) for k in star.dual_rows))
    return sorted(pts), induced, star


def is_basepoint_free(fan: Fan, D: ToricDivisor, A) -> bool:
    """Some section in A is nonvanishing at each torus-fixed point."""
    a = D.coeffs
    A = [tuple(m) for m in A]
    for m in A:
        if any(dot(m, r) < -ai for r, ai in zip(fan.rays, a)):
            raise ValueError(f"{m} is not a section of D")
    for c in fan.maximal_cones:
        if not any(all(dot(m, fan.rays[i]) == -a[i] for i in c) for m in A):
            return False
    return True


# class groups -----------------------------------------------------------

class ClassGroup:
    """``Z^rays / M`` via Smith normal form of the ray matrix."""

    def __init__(self, fan: Fan):
        self.fan = fan
        R = [list(r) for r in fan.rays]  # rays x n : the map m -> (<m, v_rho>)
        D, U, V = smith_normal_form(R)
        self.U = U
        self.diag = tuple(D[i][i] for i in range(min(len(R), fan.ambient_dim)))
        self.rank_image = sum(1 for d in self.diag if d)
        self.torsion = tuple(d for d in self.diag if d > 1)
        self.free_rank = fan.n_rays - self.rank_image

    def class_of(self, coeffs):
        c = matvec(self.U, coeffs)
        tors = tuple(c[i] % self.diag[i] for i in range(self.rank_image) if self.diag[i] > 1)
        return tors + tuple(c[self.rank_image:])

    def equivalent(self, a, b) -> bool:
        return self.class_of(a) == self.class_of(b)


def product_structure(fan: Fan):
    """Detect a product of projective spaces.

    Returns factor groups of ray indices ordered by decreasing size (ties by
    smallest index) or None.  Uses primitive collections: they must be
    disjoint, cover all rays, each sum to zero, and the number of maximal
    cones must be the product of the group sizes.
    """
    if fan.lineality or not fan.maximal_cones:
        return None
    if not fan.is_simplicial:
        return None
    faces = set()
    for c in fan.maximal_cones:
        faces |= fan.faces_of(c)
    n = fan.n_rays
    prim = []
    for k in range(1, n + 1):
        for S in combinations(range(n), k):
            s = frozenset(S)
            if s in faces:
                continue
            if any(p <= s for p in prim):
                continue
            prim.append(s)
    covered = set()
    for p in prim:
        if covered & p:
            return None
        covered |= p
    if covered != set(range(n)):
        return None
    total = 1
    for p in prim:
        if any(sum(fan.rays[i][t] for i in p) for t in range(fan.ambient_dim)):
            return None
        total *= len(p)
    if total != len(fan.maximal_cones):
        return None
    return [tuple(sorted(p)) for p in sorted(prim, key=lambda p: (-len(p), min(p)))]


def multidegree(fan: Fan, coeffs, groups=None):
    """Degree tuple of a divisor on a product of projective spaces."""
    groups = groups if groups is not None else product_structure(fan)
    if groups is None:
        raise FanError("fan is not a product of projective spaces")
    return tuple(sum(coeffs[i] for i in g) for g in groups)


def fans_isomorphic(F: Fan, G: Fan):
    """Lattice isomorphism of smooth fans with trivial minimal cone.

    Returns the ray permutation (list p with F.rays[i] -> G.rays[p[i]]) or None.
    """
    if F.ambient_dim != G.ambient_dim or F.n_rays != G.n_rays or len(F.maximal_cones) != len(G.maximal_cones):
        return None
    n = F.ambient_dim
    if n == 0:
        return []
    sig = F.maximal_cones[0]
    src = [F.rays[i] for i in sorted(sig)]
    if len(src) != n:
        return None
    try:
        Sinv = inverse_unimodular(transpose(src))
    except ValueError:
        return None
    Gray = {r: i for i, r in enumerate(G.rays)}
    Gcones = set(G.maximal_cones)
    for tau in G.maximal_cones:
        if len(tau) != n:
            continue
        for perm in permutations(sorted(tau)):
            tgt = transpose([G.rays[i] for i in perm])
            M = [[sum(tgt[i][k] * Sinv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            if any(isinstance(x, Fraction) and x.denominator != 1 for row in M for x in row):
                continue
            p = []
            for r in F.rays:
                img = matvec(M, r)
                if img not in Gray:
                    break
                p.append(Gray[img])
            else:
                if all(frozenset(p[i] for i in c) in Gcones for c in F.maximal_cones):
                    return p
    return None


def self_intersections_2d(fan: Fan):
    """Self-intersection of each ray divisor of a complete smooth 2-dimensional fan."""
    out = []
    for i in range(fan.n_rays):
        out.append(intersection_number(ToricDivisor(fan, [int(j == i) for j in range(fan.n_rays)]), frozenset({i})))
    return out


def fan_p1() -> Fan:
    return product_projective_fan([1])


def fan_p2() -> Fan:
    return product_projective_fan([2])


def fan_f1() -> Fan:
    """Hirzebruch surface F_1: rays (1,0), (0,1), (-1,1), (0,-1); ray 1 is the (-1)-curve."""
    rays = [(1, 0), (0, 1), (-1, 1), (0, -1)]
    return Fan(rays, [{0, 1}, {1, 2}, {2, 3}, {3, 0}], (), 2)
