"""Complete-intersection data, slabs, positivity and singularity census."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    LemmaViolation,
    ModelError,
    NotReflexiveError,
    UnsupportedShapeError,
)
from .fan import (
    ClassGroup,
    Fan,
    ToricDivisor,
    fan_f1,
    fans_isomorphic,
    intersection_number,
    is_basepoint_free,
    multidegree,
    normal_fan,
    polytope_of_sections,
    product_structure,
    restricted_sections,
    spanning_fan,
    star_fan,
)
from .lattice import det, dot, kernel_basis, lattice_basis, rank, same_lattice, transpose
from .laurent import AmbientModel, local_data
from .polytope import LatticePolytope, cone_index, dual_face, is_unimodular_cone, lattice_length, lattice_points, polar_dual


@dataclass
class CIData:
    groups: tuple  # ray indices of the shape fan per factor
    h: tuple  # h_i in M̃ with H_i = ker h_i
    exponents: tuple  # l[i][s]
    L: tuple  # ToricDivisor on the ambient fan per factor
    classes: tuple  # class group elements
    multidegrees: Optional[tuple]  # when the ambient fan is a product of projective spaces
    ambient_groups: Optional[tuple]
    theta_image_ok: bool
    degenerate: bool


def ci_data(model: AmbientModel) -> CIData:
    """Hyperplanes H_i, exponents l_{i,s} = deg_i(D_s) and classes L_i.

    Sums over a factor run over all k_i + 1 of its rays.
    """
    groups = product_structure(model.shape.fan)
    if groups is None:
        raise UnsupportedShapeError("Unsupported: shape is not a product of projective spaces")
    h = []
    for g in groups:
        h.append(tuple(int(j in g) for j in range(model.ell)) + (0,) * model.n_u)
    l = tuple(tuple(sum(s.D.coeffs[j] for j in g) for s in model.S.struts) for g in groups)
    for i, g in enumerate(groups):
        for s, r in enumerate(model.rho):
            if -dot(h[i], r) != l[i][s]:
                raise LemmaViolation("degree map disagrees with exponents", (i, s))
    image = lattice_basis(transpose(model.theta))
    inter = lattice_basis(kernel_basis(h, model.dim))
    ok = same_lattice(image, inter)
    if not ok:
        raise ModelError("theta(N) differs from the intersection of the H_i")
    L = []
    for g in groups:
        coeffs = [0] * model.fan.n_rays
        for j in g:
            k = model.e_ray(j)
            if k is None:
                raise ModelError(f"coordinate {j} is not a ray of the ambient fan")
            coeffs[k] = 1
        L.append(ToricDivisor(model.fan, coeffs))
    cg = ClassGroup(model.fan)
    classes = tuple(cg.class_of(D.coeffs) for D in L)
    agroups = product_structure(model.fan)
    mdeg = tuple(multidegree(model.fan, D.coeffs, agroups) for D in L) if agroups else None
    degenerate = any(all(x == 0 for x in row) for row in l)
    return CIData(
        tuple(tuple(g) for g in groups),
        tuple(h),
        l,
        tuple(L),
        classes,
        mdeg,
        tuple(tuple(g) for g in agroups) if agroups else None,
        ok,
        degenerate,
    )


@dataclass
class LocalEquations:
    v: tuple
    S: tuple  # active struts
    B: tuple  # per factor, coordinate indices not in the minimal cone of v
    exponents: tuple  # per factor, l_{i,s} for s in S
    n_inequalities: int


def local_equations(model: AmbientModel, v, ci: Optional[CIData] = None) -> LocalEquations:
    """``prod_{j in B_i(v)} x_{i,j} = prod_{s in S(v)} y_s^{l_{i,s}}`` on the chart at v."""
    ci = ci or ci_data(model)
    Sv, Bv = local_data(model, v)
    B = tuple(tuple(j for j in Bv if j in g) for g in ci.groups)
    if any(not b for b in B):
        raise LemmaViolation(f"empty coordinate set at {tuple(v)}", (v, B))
    ex = tuple(tuple(ci.exponents[i][s] for s in Sv) for i in range(len(ci.groups)))
    return LocalEquations(tuple(v), Sv, B, ex, len(Sv) + len(Bv))


# slabs ------------------------------------------------------------------

@dataclass
class SlabRecord:
    index: int
    wall: frozenset  # ray indices of the codimension-one cone of Σ
    sides: tuple  # indices of the two maximal cones
    polytope: LatticePolytope
    factor: Optional[int]  # i_s
    omitted: tuple  # shape ray indices missing from the wall
    labels: Optional[tuple] = None  # advisory (factor, index) labels of omitted rays
    stratum_cone: Optional[frozenset] = None
    stratum_fan: Optional[Fan] = None
    facet_map: Optional[dict] = None  # stratum ray -> vertex set of the slab facet
    divisor: Optional[ToricDivisor] = None
    sections: Optional[list] = None
    induced: Optional[ToricDivisor] = None
    bpf: Optional[bool] = None
    h0: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def image_dim(self):
        return None if self.sections is None else len(self.sections)


def enumerate_slabs(dual: LatticePolytope, fan: Fan, groups=None) -> list:
    """Codimension-one cones of the cracking fan intersected with P°."""
    if groups is None:
        groups = product_structure(quotient_shape(fan))
    out = []
    n = dual.ambient_dim
    for a, b, tau in fan.walls():
        C = fan.cone(tau)
        normals, eqs = C.facets()
        ineqs = list(dual.inequalities) + [(u, 0) for u in normals]
        equations = list(dual.equations) + [(e, 0) for e in eqs]
        s = LatticePolytope.from_inequalities(ineqs, equations, n)
        if s.dim != n - 1:
            continue
        omitted = tuple(sorted(set(range(fan.n_rays)) - set(tau)))
        factor = None
        if groups is not None:
            counts = [sum(1 for j in omitted if j in g) for g in groups]
            twos = [i for i, c in enumerate(counts) if c == 2]
            if len(twos) == 1 and all(c == 1 for i, c in enumerate(counts) if i != twos[0]):
                factor = twos[0]
        labels = tuple(fan.ray_labels[j] for j in omitted) if fan.ray_labels else None
        out.append(SlabRecord(len(out), frozenset(tau), (a, b), s, factor, omitted, labels))
    return out


def quotient_shape(fan: Fan) -> Fan:
    from .fan import quotient_fan

    return quotient_fan(fan)


def slab_stratum(model: AmbientModel, slab: SlabRecord) -> SlabRecord:
    """Stratum cone and fan in Σ_S for a slab; checks that iota(slab) is a face of Q_S."""
    tau = frozenset(model.e_ray(j) for j in slab.omitted)
    if None in tau or tau not in model.fan.all_cones():
        raise ModelError("omitted coordinates do not span a cone of the ambient fan", slab.index)
    star = star_fan(model.fan, tau)
    verts = slab.polytope.vertices
    img = [model.iota(x) for x in verts]
    F = model.Q.smallest_face_containing(img)
    if F is None or LatticePolytope.from_vertices(img, model.dim) != F.as_polytope():
        raise ModelError("iota(slab) is not a face of Q_S", slab.index)
    for j in slab.omitted:
        if any(y[j] != 0 for y in img):
            raise ModelError("iota(slab) leaves the coordinate stratum", slab.index)
    y0 = img[0]
    coords = [tuple(dot(k, [a - b for a, b in zip(y, y0)]) for k in star.dual_rows) for y in img]
    Y = LatticePolytope.from_vertices(coords, len(star.dual_rows))
    nf = normal_fan(Y)
    if fans_isomorphic(nf, star) is None:
        raise ModelError("normal fan of the slab differs from the stratum fan", slab.index)
    fmap = {}
    for k, w in enumerate(star.rays):
        m = min(dot(w, c) for c in coords)
        fmap[k] = frozenset(x for x, c in zip(verts, coords) if dot(w, c) == m)
    slab.stratum_cone = tau
    slab.stratum_fan = star
    slab.facet_map = fmap
    return slab


def slab_facet_coefficients(P: LatticePolytope, slab_polytope: LatticePolytope, dual=None) -> dict:
    """``a_tau`` for each facet tau of the slab (keyed by vertex set)."""
    dual = dual if dual is not None else polar_dual(P)
    if not dual.is_lattice:
        raise NotReflexiveError("slab divisors need a reflexive polytope")
    n = P.ambient_dim
    out = {}
    for T in slab_polytope.facets():
        vs = frozenset(T.vertices)
        on_boundary = any(all(dot(u, x) == c for x in vs) for u, c in dual.inequalities)
        a = 0
        if on_boundary:
            G = dual.smallest_face_containing(list(vs))
            if frozenset(G.vertices) == vs and G.dim == n - 2:
                a = lattice_length(dual_face(dual, G, P))
        out[vs] = (a, on_boundary)
    return out


def slab_divisor(P: LatticePolytope, slab: SlabRecord, dual=None) -> ToricDivisor:
    """``D_s = sum a_tau D_tau`` on the stratum fan (P reflexive)."""
    if slab.stratum_fan is None:
        raise ModelError("slab stratum not computed")
    coeffs = slab_facet_coefficients(P, slab.polytope, dual)
    out = []
    for k in range(slab.stratum_fan.n_rays):
        vs = slab.facet_map[k]
        if vs not in coeffs:
            raise ModelError("stratum ray does not match a slab facet", k)
        out.append(coeffs[vs][0])
    slab.divisor = ToricDivisor(slab.stratum_fan, out)
    return slab.divisor


def verify_slab_pullback(model: AmbientModel, ci: CIData, slab: SlabRecord) -> bool:
    """The restriction of L_{i_s} and the slab divisor have the same class."""
    if slab.factor is None:
        raise ModelError("slab has no factor index")
    pts, induced, star = restricted_sections(model.fan, ci.L[slab.factor], slab.stratum_cone)
    if star.rays != slab.stratum_fan.rays:
        raise ModelError("restriction used a different stratum chart")
    slab.sections, slab.induced = pts, induced
    if not ClassGroup(star).equivalent(induced.coeffs, slab.divisor.coeffs):
        raise LemmaViolation("restricted class differs from slab divisor", slab.index)
    return True


@dataclass
class PositivityReport:
    verdict: bool
    slabs: tuple

    def __bool__(self):
        return self.verdict


def slab_table(model: AmbientModel, ci: Optional[CIData] = None) -> list:
    """Full per-slab pipeline: stratum, divisor, restriction, basepoint freeness."""
    ci = ci or ci_data(model)
    slabs = enumerate_slabs(model.dual, model.cracking_fan, ci.groups)
    for s in slabs:
        slab_stratum(model, s)
        slab_divisor(model.P, s, model.dual)
        verify_slab_pullback(model, ci, s)
        s.bpf = is_basepoint_free(s.stratum_fan, s.induced, s.sections)
        try:
            s.h0 = len(lattice_points(polytope_of_sections(s.induced)))
        except Exception:
            s.h0 = 0
    return slabs


def is_positive(model: AmbientModel, ci: Optional[CIData] = None) -> PositivityReport:
    slabs = slab_table(model, ci)
    return PositivityReport(all(s.bpf for s in slabs), tuple(slabs))


@dataclass
class AnticanonicalReport:
    divisor: ToricDivisor
    klass: tuple
    minus_k: tuple
    identity: bool


def anticanonical_divisor(model: AmbientModel, ci: Optional[CIData] = None) -> AnticanonicalReport:
    """D_S = sum of strut rays, with ``[-K] = [D_S] + sum [L_i]`` checked."""
    ci = ci or ci_data(model)
    coeffs = [int(any(k == "s" for k, _ in kinds)) for kinds in model.ray_kind]
    D = ToricDivisor(model.fan, coeffs)
    cg = ClassGroup(model.fan)
    minus_k = [1] * model.fan.n_rays
    total = list(coeffs)
    for L in ci.L:
        total = [a + b for a, b in zip(total, L.coeffs)]
    ok = cg.equivalent(minus_k, total)
    if not ok:
        raise LemmaViolation("anticanonical class identity fails")
    return AnticanonicalReport(D, cg.class_of(coeffs), cg.class_of(minus_k), ok)


# singularities ----------------------------------------------------------

def _is_odp(rays) -> bool:
    if len(rays) != 4 or len(rays[0]) != 3 or rank(rays) != 3:
        return False
    from itertools import combinations

    if any(abs(det(list(t))) != 1 for t in combinations(rays, 3)):
        return False
    a = rays[0]
    for b, c, d in ((rays[1], rays[2], rays[3]), (rays[1], rays[3], rays[2]), (rays[2], rays[3], rays[1])):
        # a and the opposite corner against the two others
        if all(x + y == z + w for x, y, z, w in zip(a, d, b, c)):
            return True
    return False


def singularity_census(P: LatticePolytope) -> dict:
    """Classify the maximal cones of the spanning fan of a Fano polytope."""
    fan = spanning_fan(P)
    cones = []
    counts = {"smooth": 0, "odp": 0, "other": 0}
    for c in fan.maximal_cones:
        rays = [fan.rays[i] for i in sorted(c)]
        C = fan.cone(c)
        if C.is_simplicial and is_unimodular_cone(C):
            tag, idx = "smooth", 1
        elif _is_odp(rays):
            tag, idx = "odp", None
        else:
            tag = "other"
            idx = cone_index(C) if C.is_simplicial else None
        counts[tag] += 1
        cones.append((tuple(rays), tag, idx))
    return {"cones": cones, "counts": counts}


# F1 ---------------------------------------------------------------------

def is_f1(fan: Fan) -> bool:
    return fan.ambient_dim == 2 and fans_isomorphic(fan, fan_f1()) is not None


def f1_curves(fan: Fan):
    """Ray indices ``(E, F)``: the (-1)-curve and a fibre."""
    if not is_f1(fan):
        raise ValueError("fan is not F1")
    selfint = [intersection_number(ToricDivisor(fan, [int(j == i) for j in range(fan.n_rays)]), frozenset({i})) for i in range(fan.n_rays)]
    E = selfint.index(-1)
    F = selfint.index(0)
    return E, F


def f1_class(D: ToricDivisor) -> tuple:
    """``(h, c)`` with ``D ~ h H + c E``, H the pullback of a line."""
    E, F = f1_curves(D.fan)
    dE = intersection_number(D, frozenset({E}))
    dF = intersection_number(D, frozenset({F}))
    return dF + dE, -dE
