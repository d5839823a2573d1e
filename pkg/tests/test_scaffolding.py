from itertools import product

import pytest

from cracklat import catalog
from cracklat.cracked import is_cracked, vertical_faces
from cracklat.errors import FanError, ScaffoldingError, UnsupportedShapeError
from cracklat.fan import ToricDivisor, fan_f1, product_projective_fan
from cracklat.polytope import LatticePolytope, polar_dual
from cracklat.scaffolding import (
    Scaffolding,
    Shape,
    Strut,
    brute_force_cover_exists,
    candidate_struts,
    is_full,
    scaffold_shape_p1,
    search_full_scaffolding,
    strut_from_polytope,
    validate_scaffolding,
)

P2 = Shape.projective([2])


def poly(V):
    return LatticePolytope.from_vertices(V, len(V[0]))


def scaffold(P, shape, data):
    return Scaffolding(P, shape, [Strut(ToricDivisor(shape.fan, D), tuple(chi)) for D, chi in data])


def code_of(S):
    with pytest.raises(ScaffoldingError) as exc:
        validate_scaffolding(S)
    return exc.value.code, exc.value.witness


def test_segment_point_struts():
    seg = poly([(-1,), (1,)])
    sh = Shape.projective([1])
    S = validate_scaffolding(scaffold(seg, sh, [((1, -1), ()), ((-1, 1), ())]))
    assert S.validated
    assert [Q.vertices for Q in S.strut_polytopes()] == [((-1,),), ((1,),)]
    # D = 0 is the single point 0, which cannot span the segment
    assert code_of(scaffold(seg, sh, [((0, 0), ()), ((0, 0), ())]))[0] == "HullMismatch"
    # one segment strut also works
    assert validate_scaffolding(scaffold(seg, sh, [((1, 1), ())])).validated


def test_validation_error_codes():
    P = catalog.pentagon()
    D1, D2 = ((1, 1, 0), ()), ((0, 0, 1), ())
    assert validate_scaffolding(scaffold(P, P2, [D1, D2])).validated
    assert code_of(scaffold(P, P2, [D1, D2, D2]))[0] == "UniqueVertexCover"
    code, w = code_of(scaffold(P, P2, [D1]))
    assert code == "HullMismatch" and w in P.vertices and not scaffold(P, P2, [D1]).strut_polytopes()[0].contains(w)
    assert code_of(scaffold(P, P2, [((2, 1, 0), ()), D2]))[0] == "StrutNotContained"
    # the (-1)-curve on F1 is not nef
    F1 = Shape(fan_f1())
    bad = Scaffolding(poly([(0, 0), (1, 0), (0, 1)]), F1, [Strut(ToricDivisor(F1.fan, (0, 1, 0, 0)), ())])
    assert code_of(bad) == ("NotNef", 0)
    other = Strut(ToricDivisor(product_projective_fan([1, 1]), (1, 1, 1, 1)), ())
    assert code_of(Scaffolding(P, P2, [other]))[0] == "WrongFan"
    assert code_of(scaffold(P, P2, [((1, 1, 0), (0,)), D2]))[0] == "BadOffset"
    with pytest.raises(ScaffoldingError) as exc:
        validate_scaffolding(scaffold(P, P2, [((-1, -1, 0), ()), D2]))
    assert exc.value.code in ("NotNef", "EmptyStrut")


def test_catalog_scaffoldings_are_full():
    for S in [
        catalog.triangle_scaffolding(),
        catalog.pentagon_scaffolding(),
        catalog.cube_pair_scaffolding(),
        catalog.diamond_scaffolding(),
        catalog.mm2_18_scaffolding(),
    ]:
        assert S.validated
        assert is_full(S).verdict


def test_pentagon_example():
    S = catalog.pentagon_scaffolding()
    degrees = sorted(sum(s.D.coeffs) for s in S.struts)
    assert degrees == [1, 2]
    rep = is_full(S)
    assert len(rep.vertical) == 3 and rep.covering == ((0,), (0,), (1,))


def test_diamond_and_split_square():
    S = catalog.diamond_scaffolding()
    assert [Q.n_vertices for Q in S.strut_polytopes()] == [2, 2]
    square = poly([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    for u in [(0, 1), (1, 0)]:
        with pytest.raises(ScaffoldingError) as exc:
            scaffold_shape_p1(square, Shape.p1(u))
        assert exc.value.code == "NotCracked"


def test_shape_p1_outputs_valid_and_full():
    for i in catalog.NEGATIVE_IDS:
        P = catalog.ks3(i)
        for u in [(1, 1, 0), (0, 1, 1), (1, 0, 1)]:
            sh = Shape.p1(u)
            if not is_cracked(polar_dual(P), sh.cracking_fan).verdict:
                continue
            S = scaffold_shape_p1(P, sh)
            assert S.validated and is_full(S).verdict, (i, u)
    with pytest.raises(UnsupportedShapeError):
        scaffold_shape_p1(catalog.pentagon(), P2)


def test_strut_from_polytope():
    sh = P2
    s = strut_from_polytope(sh, poly([(0, 0), (2, 0), (0, 2)]))
    assert sum(s.D.coeffs) == 2
    with pytest.raises(ScaffoldingError):
        strut_from_polytope(sh, poly([(0, 0), (1, 1)]))
    with pytest.raises(ScaffoldingError):
        strut_from_polytope(sh, poly([(0, 0), (-1, 0), (0, -1)]))


def test_unscaffoldable_polygon_certificate():
    P = catalog.unscaffoldable_polygon()
    S, cert = search_full_scaffolding(P, P2)
    assert S is None and not cert.found
    assert len(cert.vertical) == 3
    assert set(cert.faces_without_candidate) == set(cert.vertical)
    assert not brute_force_cover_exists(P.n_vertices, cert.signatures)


def test_search_finds_catalog_scaffoldings():
    S, cert = search_full_scaffolding(catalog.triangle_n(), P2)
    assert cert.found and [tuple(s.D.coeffs) for s in S.struts] == [(1, 1, 1)]
    S, cert = search_full_scaffolding(catalog.pentagon(), P2)
    assert is_full(S).verdict and len(S.struts) == 2
    S, cert = search_full_scaffolding(catalog.cube_pair(), Shape.projective([1, 1, 1]))
    assert is_full(S).verdict and len(S.struts) == 2
    with pytest.raises(UnsupportedShapeError):
        candidate_struts(catalog.pentagon(), Shape(fan_f1()))


def triangles_in(P):
    """Independent oracle: every t + k * conv{0, e1, e2} inside P meeting a vertex of P."""
    xs = [v[0] for v in P.vertices]
    ys = [v[1] for v in P.vertices]
    out = set()
    for k in range(0, max(xs) - min(xs) + 1):
        for t in product(range(min(xs), max(xs) + 1), range(min(ys), max(ys) + 1)):
            T = [t, (t[0] + k, t[1]), (t[0], t[1] + k)]
            if all(P.contains(x) for x in T):
                Q = poly(T)
                sig = frozenset(v for v in P.vertices if Q.contains(v))
                if sig:
                    out.add((Q, sig))
    return list(out)


def full_scaffolding_exists(P):
    edges = [E.vertices for E in vertical_faces(P, P2.cracking_fan)]
    cands = triangles_in(P)

    def go(remaining, chosen):
        if not remaining:
            return all(any(all(Q.contains(x) for x in e) for Q in chosen) for e in edges)
        v = min(remaining)
        for Q, sig in cands:
            if v in sig and sig <= remaining:
                if go(remaining - sig, chosen + [Q]):
                    return True
        return False

    return go(frozenset(P.vertices), [])


def test_search_against_independent_oracle(polygons):
    n_found = n_none = 0
    for V in polygons:
        P = poly(V)
        if not is_cracked(polar_dual(P), P2.cracking_fan).verdict:
            continue
        S, cert = search_full_scaffolding(P, P2)
        assert (S is not None) == full_scaffolding_exists(P), V
        assert cert.found == brute_force_cover_exists(P.n_vertices, cert.signatures), V
        if S is None:
            n_none += 1
            # the certificate either names faces without any candidate or exhausts the covers
            assert cert.faces_without_candidate or not brute_force_cover_exists(P.n_vertices, cert.signatures)
        else:
            n_found += 1
            assert is_full(S).verdict
    assert n_found == 79 - 45 and n_none == 45


def test_shape_requires_smooth_complete():
    from cracklat.fan import Fan

    with pytest.raises(FanError):
        Shape(Fan([(1, 0), (0, 1)], [{0, 1}], (), 2))
