from fractions import Fraction

import pytest

from cracklat import catalog
from cracklat.errors import ModelError, TheoremViolation, UnboundedError
from cracklat.fan import ToricDivisor, fans_isomorphic, product_projective_fan
from cracklat.lattice import dot, matvec
from cracklat.laurent import (
    build_ambient,
    direct_tangent_cone,
    image_vertices,
    is_smooth_ambient,
    local_data,
    tangent_cone_ambient,
    verify_embedding,
)
from cracklat.polytope import LatticePolytope, is_unimodular_cone, lattice_points
from cracklat.scaffolding import Scaffolding, Shape, Strut, scaffold_shape_p1, strut_from_polytope, validate_scaffolding
from corpus import catalog_triples, split_strut, theorem_corpus


def poly(V):
    return LatticePolytope.from_vertices(V, len(V[0]))


def models():
    return [(name, build_ambient(S)) for name, S in catalog_triples()]


def test_pentagon_model():
    m = build_ambient(catalog.pentagon_scaffolding())
    assert m.rho == ((-1, -1, 0), (0, 0, -1))
    prism = poly([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert m.Q == prism
    assert fans_isomorphic(m.fan, product_projective_fan([2, 1])) is not None
    assert m.coker_theta() == ((1, 1), 1)


def test_cube_pair_model():
    m = build_ambient(catalog.cube_pair_scaffolding())
    assert m.dim == 6
    assert fans_isomorphic(m.fan, product_projective_fan([3, 3])) is not None
    assert m.coker_theta() == ((1, 1, 1), 3)


def test_degenerate_scaffolding_rejected():
    P = poly([(0,)])
    S = Scaffolding(P, Shape.projective([1]), [Strut(ToricDivisor(Shape.projective([1]).fan, (0, 0)), ())])
    with pytest.raises(UnboundedError):
        build_ambient(S)


def test_iota_examples():
    m = build_ambient(catalog.pentagon_scaffolding())
    assert m.iota((0, 0)) == (0, 0, 0)
    with pytest.raises(ModelError):
        m.iota((5, 5))
    for v in m.dual.vertices:
        y = m.iota(v)
        assert matvec(m.theta_star, y) == v
        assert all(dot(r, y) >= -1 for r in m.rho) and all(x >= 0 for x in y[: m.ell])


@pytest.mark.parametrize("name", [n for n, _ in catalog_triples()])
def test_projecting_struts(name):
    m = dict(models())[name]
    m.check_projecting_struts()
    # independent sampling of the pairing identity on lattice points of each piece
    for u, Cu in enumerate(m.pieces()):
        if Cu is None:
            continue
        A = m.iota_u(u)
        for p in lattice_points(Cu):
            for s, r in enumerate(m.rho):
                assert dot(r, matvec(A, p)) == dot(m.u_of(u, s), p)


@pytest.mark.parametrize("name", [n for n, _ in catalog_triples()])
def test_embedding_faces_and_cones(name):
    m = dict(models())[name]
    rep = verify_embedding(m)
    assert all(same for _, same in rep.cones)
    faces = [F for F in rep.faces if F is not None]
    assert faces
    for F in faces:
        assert F in [G for d in range(m.Q.dim + 1) for G in m.Q.faces(d)]


def test_pentagon_embedding_counts():
    m = build_ambient(catalog.pentagon_scaffolding())
    rep = verify_embedding(m)
    assert len(rep.faces) == 3 and all(F.dim == 2 for F in rep.faces)
    assert len(rep.cones) == 5


@pytest.mark.parametrize("name", [n for n, _ in catalog_triples()])
def test_lemma_cone_is_tangent_cone(name):
    m = dict(models())[name]
    for v in m.dual.vertices:
        C = tangent_cone_ambient(m, v)
        Sv, Bv = local_data(m, v)
        assert len(Sv) + len(Bv) == m.dim
        assert is_unimodular_cone(C)
        assert C.same_cone(direct_tangent_cone(m, v))


def test_single_strut_model():
    S = catalog.triangle_scaffolding()
    m = build_ambient(S)
    rep = verify_embedding(m)
    assert rep.ok
    assert is_smooth_ambient(m).verdict


def test_unscaffoldable_polygon_not_smooth():
    P = catalog.unscaffoldable_polygon()
    sh = Shape.projective([2])
    pts = [strut_from_polytope(sh, poly([v])) for v in P.vertices]
    # point struts alone are degenerate; add the degree-1 triangle at the corner (-1,-1)
    tri = strut_from_polytope(sh, poly([(-1, -1), (0, -1), (-1, 0)]))
    S = validate_scaffolding(Scaffolding(P, sh, [tri] + [s for s, v in zip(pts, P.vertices) if v not in ((-1, -1), (-1, 0))]))
    rep = is_smooth_ambient(build_ambient(S))
    assert not rep.verdict and rep.crack.verdict and not rep.full.verdict


def test_split_cube_strut_witness():
    S = split_strut(catalog.cube_pair_scaffolding(), 0)
    rep = is_smooth_ambient(build_ambient(S))
    assert not rep.verdict
    v, y, C = rep.witness
    assert not is_unimodular_cone(C, modulo_lineality=True)


def test_vertex_only_check_counterexample():
    P = poly([(-2, -1), (-1, -1), (-1, 0), (1, 0), (1, 1)])
    S = scaffold_shape_p1(P, Shape.p1((0, 1)), require_cracked=False)
    m = build_ambient(S)
    rep = is_smooth_ambient(m)
    assert rep.vertex_verdict and not rep.verdict
    assert not rep.crack.verdict
    bad = [p for p, y, C, ok in rep.vertex_cones if not ok]
    assert (Fraction(1, 2), 0) in bad
    assert (Fraction(1, 2), 0) not in m.dual.vertices
    assert (0, 0, Fraction(1, 2)) in m.Q.vertices
    assert image_vertices(m)[: m.dual.n_vertices] == list(m.dual.vertices)


def test_strict_and_lineality_agree_on_catalog():
    for name, m in models():
        assert is_smooth_ambient(m).verdict == is_smooth_ambient(m, strict=True).verdict, name


def test_theorem_violation_alarm(monkeypatch):
    import cracklat.laurent as L

    m = build_ambient(catalog.pentagon_scaffolding())
    monkeypatch.setattr(L, "_smooth_cone", lambda C, strict: False)
    with pytest.raises(TheoremViolation) as exc:
        L.is_smooth_ambient(m)
    cert = exc.value.certificates
    assert cert.crack.verdict and cert.full.verdict
    assert cert.vertex_cones and not any(ok for *_, ok in cert.vertex_cones)
    assert not L.is_smooth_ambient(m, raise_on_mismatch=False).verdict


def test_theorem_cross_check_image_wide(polygons):
    corpus = theorem_corpus(polygons)
    assert len(corpus) >= 50
    names = {n for n, _ in corpus}
    assert {"triangle", "pentagon", "cube_pair", "diamond", "mm2_18", "ks15"} <= names
    assert any("^g" in n for n in names) and any("/split" in n for n in names)
    agree = total = 0
    verdicts = set()
    for name, S in corpus:
        try:
            m = build_ambient(S)
        except UnboundedError:
            assert all(sum(s.D.coeffs) == 0 for s in S.struts), name
            continue
        rep = is_smooth_ambient(m, raise_on_mismatch=False)
        b = bool(rep.crack.verdict and rep.full is not None and rep.full.verdict)
        agree += rep.verdict == b
        total += 1
        verdicts.add(b)
    assert total >= 50 and verdicts == {True, False}
    assert agree == total
