"""The ambient toric model of a scaffolding: Q_S, theta, iota and smoothness."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Optional

from .cracked import is_cracked, piece
from .errors import LemmaViolation, ModelError, NotFanoError, TheoremViolation
from .fan import normal_fan
from .lattice import (
    dot,
    invariant_factors,
    inverse_rational,
    inverse_unimodular,
    matmul,
    matvec,
    primitive_direction,
    transpose,
)
from .polytope import (
    LatticePolytope,
    RationalCone,
    is_unimodular_cone,
    lattice_points,
    polar_dual,
    tangent_cone,
)
from .scaffolding import Scaffolding, is_full


def _int_matrix(A):
    out = []
    for row in A:
        if any(Fraction(x).denominator != 1 for x in row):
            raise ModelError("expected an integral matrix")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


class AmbientModel:
    """Everything attached to a validated scaffolding S of P.

    Coordinates on ``Ñ = Z^ℓ ⊕ N_U``: the first ℓ entries are indexed by the
    rays of the shape fan, the rest by the chosen basis of N_U.
    """

    def __init__(self, S: Scaffolding):
        self.S = S
        self.shape = S.shape
        self.P = S.P
        self.ell = self.shape.ell
        self.n_u = self.shape.n_u
        self.n = self.shape.n
        self.dim = self.ell + self.n_u
        self.rho = tuple(s.rho() for s in S.struts)
        self.e = tuple(tuple(int(j == i) for j in range(self.dim)) for i in range(self.ell))
        ineqs = [(r, -1) for r in self.rho] + [(e, 0) for e in self.e]
        self.Q = LatticePolytope.from_inequalities(ineqs, (), self.dim)
        self.fan = normal_fan(self.Q)
        self.ray_kind = []
        for r in self.fan.rays:
            kinds = [("e", i) for i, e in enumerate(self.e) if e == r]
            kinds += [("s", k) for k, p in enumerate(self.rho) if any(p) and primitive_direction(p) == r]
            if not kinds:
                raise ModelError(f"ray {r} of the ambient fan is not a coordinate or strut ray")
            self.ray_kind.append(tuple(kinds))
        B = self.shape.splitting.matrix
        Binv = inverse_unimodular(B)
        R = [list(r) for r in self.shape.fan.rays]
        d = self.shape.d
        block = [list(r) + [0] * self.n_u for r in R]
        block += [[0] * d + [int(i == j) for j in range(self.n_u)] for i in range(self.n_u)]
        self.theta = _int_matrix(matmul(block, Binv))
        self.theta_star = tuple(tuple(r) for r in transpose(self.theta))
        try:
            self.dual = polar_dual(self.P)
        except Exception as exc:
            raise NotFanoError(str(exc))
        self.cracking_fan = self.shape.cracking_fan
        self._iota_u = {}
        self._pieces = None

    # ray bookkeeping ---------------------------------------------------

    def e_ray(self, i) -> Optional[int]:
        for k, kinds in enumerate(self.ray_kind):
            if ("e", i) in kinds:
                return k
        return None

    def strut_ray(self, s) -> Optional[int]:
        for k, kinds in enumerate(self.ray_kind):
            if ("s", s) in kinds:
                return k
        return None

    # fixed points and iota --------------------------------------------

    @property
    def fixed_points(self):
        return tuple(range(len(self.shape.fan.maximal_cones)))

    def iota_u(self, u) -> tuple:
        """Matrix of the linear map ``M -> M̃`` extending iota on C_u."""
        if u not in self._iota_u:
            sigma = sorted(self.shape.fan.maximal_cones[u])
            d = self.shape.d
            Rs = [self.shape.fan.rays[i] for i in sigma]
            Rinv = inverse_rational(transpose(Rs))  # c = Rinv m̄
            BT = transpose(self.shape.splitting.matrix)
            rows = []
            for i in range(self.ell):
                if i in sigma:
                    rows.append(list(Rinv[sigma.index(i)]) + [0] * self.n_u)
                else:
                    rows.append([0] * self.n)
            for j in range(self.n_u):
                rows.append([0] * d + [int(t == j) for t in range(self.n_u)])
            self._iota_u[u] = _int_matrix(matmul(rows, BT))
        return self._iota_u[u]

    def cones_containing(self, p) -> list:
        return [u for u, c in enumerate(self.cracking_fan.maximal_cones) if self.cracking_fan.cone(c).contains(p)]

    def iota(self, p) -> tuple:
        """The piecewise linear lift of p ∈ P°, checked on every cone containing p."""
        if not self.dual.contains(p):
            raise ModelError(f"{tuple(p)} is not in the polar polytope")
        us = self.cones_containing(p)
        imgs = {tuple(Fraction(x) for x in matvec(self.iota_u(u), p)) for u in us}
        if len(imgs) != 1:
            raise ModelError(f"lifts of {tuple(p)} disagree across cones")
        (y,) = imgs
        return tuple(int(x) if x.denominator == 1 else x for x in y)

    def u_of(self, u, s) -> tuple:
        """``u(s) = u^D + chi`` in N."""
        st = self.S.struts[s]
        uD = st.vertex_for(self.shape.fan.maximal_cones[u])
        return self.shape.to_n(uD, st.chi)

    def check_projecting_struts(self, max_points=200) -> None:
        """``iota_u^* rho_s = u(s)`` for every fixed point and strut, and on sample points of C_u."""
        for u in self.fixed_points:
            A = self.iota_u(u)
            AT = transpose(A)
            pts = [p for p in lattice_points(self.dual) if self.cracking_fan.cone(self.cracking_fan.maximal_cones[u]).contains(p)]
            for s, r in enumerate(self.rho):
                us = self.u_of(u, s)
                if tuple(matvec(AT, r)) != tuple(us):
                    raise LemmaViolation(f"iota_u^* rho_s differs from u(s) at u={u}, s={s}", (u, s))
                for p in pts[:max_points]:
                    if dot(r, matvec(A, p)) != dot(us, p):
                        raise LemmaViolation("pairing identity fails", (u, s, p))
        for u in self.fixed_points:
            if tuple(map(tuple, matmul(self.theta_star, self.iota_u(u)))) != tuple(
                tuple(int(i == j) for j in range(self.n)) for i in range(self.n)
            ):
                raise LemmaViolation("theta^* iota_u is not the identity", u)

    def pieces(self):
        """``C_u = (maximal cone of u) ∩ P°`` for each fixed point, or None if lower dimensional."""
        if self._pieces is None:
            self._pieces = tuple(piece(self.dual, self.cracking_fan, c) for c in self.cracking_fan.maximal_cones)
        return self._pieces

    def coker_theta(self) -> tuple:
        """Invariant factors of theta, and rank of its cokernel."""
        inv = invariant_factors(self.theta)
        return tuple(inv), self.dim - len(inv)

    def __repr__(self):
        return f"AmbientModel(dim={self.dim}, struts={len(self.rho)}, Q_vertices={self.Q.n_vertices})"


def build_ambient(S: Scaffolding) -> AmbientModel:
    return AmbientModel(S)


def local_data(model: AmbientModel, v):
    """Active struts S(v) and coordinate indices B(v) at a vertex of P°."""
    v = tuple(v)
    Sv = []
    for k, Q in enumerate(model.S.strut_polytopes()):
        if min(dot(x, v) for x in Q.vertices) == -1:
            Sv.append(k)
    C = model.cracking_fan.minimal_cone_containing(v)
    Bv = [i for i in range(model.ell) if i not in C]
    return tuple(Sv), tuple(Bv)


def tangent_cone_ambient(model: AmbientModel, v, check: bool = True) -> RationalCone:
    """Tangent cone of Q_S at iota(v) from the active inequalities; compared with the direct one."""
    Sv, Bv = local_data(model, v)
    apex = model.iota(v)
    rows = [model.rho[s] for s in Sv] + [model.e[i] for i in Bv]
    C = RationalCone.from_inequalities(rows, model.dim, apex)
    if check:
        T = direct_tangent_cone(model, v)
        if not C.same_cone(T):
            raise LemmaViolation(f"active inequalities at {v} do not give the tangent cone", (v, C, T))
    return C


def direct_tangent_cone(model: AmbientModel, v) -> RationalCone:
    y = model.iota(v)
    F = model.Q.smallest_face_containing([y])
    T = tangent_cone(model.Q, F)
    return RationalCone(T.rays, T.lineality, y, T.dim_ambient)


@dataclass
class SmoothnessReport:
    verdict: bool
    vertex_cones: tuple  # (p, iota(p), cone, unimodular) for every vertex of every piece
    crack: object
    full: object
    strict: bool
    vertex_verdict: bool = None  # the same test restricted to vertices of P°

    def __bool__(self):
        return self.verdict

    @property
    def witness(self):
        for v, y, C, ok in self.vertex_cones:
            if not ok:
                return (v, y, C)
        return None


def _smooth_cone(C: RationalCone, strict: bool) -> bool:
    if strict:
        return C.is_pointed and is_unimodular_cone(C)
    return is_unimodular_cone(C, modulo_lineality=True)


def image_vertices(model: AmbientModel) -> list:
    """Vertices of P° followed by the remaining vertices of its pieces."""
    pts = list(model.dual.vertices)
    seen = set(pts)
    for Q in model.pieces():
        for w in Q.vertices if Q is not None else ():
            if w not in seen:
                seen.add(w)
                pts.append(w)
    return pts


def is_smooth_ambient(model: AmbientModel, strict: bool = False, raise_on_mismatch: bool = True) -> SmoothnessReport:
    """Smoothness of the ambient space along the image, computed two ways.

    (a) the tangent cone of Q_S at iota(p) is unimodular for every vertex p of
    every piece of P°, which covers every torus orbit meeting the image;
    (b) P° is cracked along the cracking fan and the scaffolding is full.  A
    disagreement is a TheoremViolation.  ``vertex_verdict`` is (a) over the
    vertices of P° alone; it can hold while (b) fails, when the crack is
    singular only at a vertex of a piece interior to an edge of P°.
    """
    nv = model.dual.n_vertices
    cones = []
    for p in image_vertices(model):
        C = direct_tangent_cone(model, p)
        cones.append((p, model.iota(p), C, _smooth_cone(C, strict)))
    a = all(ok for *_, ok in cones)
    crack = is_cracked(model.dual, model.cracking_fan)
    full = None
    if crack.verdict and model.dual.is_lattice:
        full = is_full(model.S)
    b = bool(crack.verdict and full is not None and full.verdict)
    rep = SmoothnessReport(a, tuple(cones), crack, full, strict, all(ok for *_, ok in cones[:nv]))
    if a != b and raise_on_mismatch:
        raise TheoremViolation(f"direct check says {a}, cracked-and-full says {b}", rep)
    return rep


@dataclass
class EmbeddingReport:
    faces: tuple  # per fixed point: face of Q_S or None when C_u is lower dimensional
    cones: tuple  # per vertex of P°: (v, theta^*(C̃_v) == C_v)
    monoid: tuple  # per vertex of P°: number of lattice points checked
    ok: bool = True
    notes: dict = field(default_factory=dict)


def verify_embedding(model: AmbientModel, box: int = 2) -> EmbeddingReport:
    """Face property of iota(C_u), theta^*(C̃_v) = C_v, and lifting of lattice points of C_v."""
    faces = []
    for u, Cu in enumerate(model.pieces()):
        if Cu is None:
            faces.append(None)
            continue
        A = model.iota_u(u)
        img = [tuple(matvec(A, x)) for x in Cu.vertices]
        F = model.Q.smallest_face_containing(img)
        if F is None or LatticePolytope.from_vertices(img, model.dim) != F.as_polytope():
            raise ModelError(f"iota(C_{u}) is not a face of Q_S", u)
        faces.append(F)
    cones, monoid = [], []
    for v in model.dual.vertices:
        Ct = direct_tangent_cone(model, v).translate_to_origin()
        Cv = tangent_cone(model.dual, v).translate_to_origin()
        img = Ct.linear_image(model.theta_star)
        same = img.same_cone(Cv)
        if not same:
            raise ModelError(f"theta^* of the ambient cone at {v} is not the cone of P°", v)
        cones.append((v, same))
        us = model.cones_containing(v)
        checked = 0
        for m in iproduct(range(-box, box + 1), repeat=model.n):
            if not Cv.contains(m):
                continue
            checked += 1
            if not any(Ct.contains(matvec(model.iota_u(u), m)) for u in us):
                raise ModelError(f"lattice point {m} of C_v has no lift at {v}", (v, m))
        monoid.append((v, checked))
    return EmbeddingReport(tuple(faces), tuple(cones), tuple(monoid))
