import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cracklat import catalog
from cracklat.errors import EmptyPolytopeError, OriginNotInteriorError, UnboundedError
from cracklat.palp import parse_palp_all, to_polytope
from cracklat.polytope import (
    LatticePolytope,
    RationalCone,
    cayley_sum,
    dual_face,
    lattice_isomorphism,
    is_unimodular_cone,
    lattice_length,
    lattice_points,
    polar_dual,
    product as polytope_product,
    standard_simplex,
    tangent_cone,
)


def poly(V):
    return LatticePolytope.from_vertices(V, len(V[0]))


def box_scan(P):
    """Independent oracle: every integer point of the bounding box tested against the inequalities."""
    lo = [min(v[i] for v in P.vertices) for i in range(P.ambient_dim)]
    hi = [max(v[i] for v in P.vertices) for i in range(P.ambient_dim)]
    out = []
    for x in product(*[range(int(a), int(b) + 1) for a, b in zip(lo, hi)]):
        if all(sum(u * xi for u, xi in zip(a, x)) >= c for a, c in P.inequalities) and all(
            sum(u * xi for u, xi in zip(a, x)) == c for a, c in P.equations
        ):
            out.append(x)
    return sorted(out)


def test_dual_description_examples():
    sq = LatticePolytope.from_inequalities([((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)], ambient_dim=2)
    assert set(sq.vertices) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    prism = LatticePolytope.from_inequalities(
        [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((-1, -1, 0), -1), ((0, 0, -1), -1)], ambient_dim=3
    )
    assert prism.n_vertices == 6
    assert prism.f_vector()[:3] == (6, 9, 5)
    with pytest.raises(UnboundedError):
        LatticePolytope.from_inequalities([((1,), 0)], ambient_dim=1)
    with pytest.raises(EmptyPolytopeError) as exc:
        LatticePolytope.from_inequalities([((1,), 1), ((-1,), 0)], ambient_dim=1)
    assert exc.value.certificate is not None


def test_polar_examples():
    square = poly([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert polar_dual(square) == catalog.diamond()
    assert polar_dual(catalog.triangle_m()) == catalog.triangle_n()
    assert polar_dual(polar_dual(catalog.triangle_m())) == catalog.triangle_m()
    with pytest.raises(OriginNotInteriorError):
        polar_dual(poly([(0, 0), (1, 0), (0, 1)]))


def test_polar_involution_on_ks_sample(ks3_text):
    for i, m in parse_palp_all(ks3_text)[::97]:
        P = to_polytope(m)
        D = polar_dual(P)
        assert D.is_lattice, i
        assert polar_dual(D) == P, i


def test_dual_face_pairing_and_involution(ks3_text):
    for i, m in parse_palp_all(ks3_text)[::211]:
        P = to_polytope(m)
        D = polar_dual(P)
        for d in range(P.dim):
            for F in P.faces(d):
                G = dual_face(P, F, D)
                assert F.dim + G.dim == P.dim - 1
                assert set(dual_face(D, G, P).vertices) == set(F.vertices)


def test_dual_face_example():
    P = catalog.triangle_m()
    v = [F for F in P.faces(0) if tuple(F.vertices) == ((1, 0),)][0]
    assert set(dual_face(P, v).vertices) == {(-1, -1), (-1, 2)}


def test_face_counts():
    cube = poly(list(product((-1, 1), repeat=3)))
    assert cube.f_vector()[:3] == (8, 12, 6)
    assert standard_simplex(3).f_vector()[:3] == (4, 6, 4)


def test_tangent_cones():
    sq = poly([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert tangent_cone(sq, (0, 0)).same_cone(RationalCone.from_generators([(1, 0), (0, 1)]))
    T = tangent_cone(standard_simplex(2), (1, 0))
    assert T.same_cone(RationalCone.from_generators([(-1, 0), (-1, 1)]))
    T2 = tangent_cone(standard_simplex(2, 2), (2, 0))
    assert T2.same_cone(T)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=7), st.integers(2, 3))
def test_tangent_cones_dilation_invariant(pts, k):
    P = LatticePolytope.from_vertices(pts, 2)
    if P.dim < 2:
        return
    kP = P.dilate(k)
    for v in P.vertices:
        assert tangent_cone(P, v).same_cone(tangent_cone(kP, tuple(k * x for x in v)))


def test_unimodular_cone_examples():
    assert is_unimodular_cone(RationalCone.from_generators([(1, 0), (0, 1)]))
    assert not is_unimodular_cone(RationalCone.from_generators([(1, 0), (1, 2)]))
    odp = RationalCone.from_generators([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])
    assert not is_unimodular_cone(odp)
    assert is_unimodular_cone(RationalCone.from_generators([(1, 1, 0), (0, 1, 1)]))
    assert not is_unimodular_cone(RationalCone.from_generators([(1, 1, 0), (1, -1, 0)]))


def test_lattice_length():
    assert lattice_length(((0, 0), (2, 4))) == 2
    assert lattice_length(((0, 0), (1, 1))) == 1
    P = catalog.cyclic_shift(catalog.ks3(15))
    lengths = {}
    for E in P.edges():
        a, b = E.vertices
        d = tuple(y - x for x, y in zip(a, b))
        lengths[d] = lattice_length(E)
    assert max(lengths.values()) == 2
    long = [d for d, n in lengths.items() if n == 2]
    assert len(long) == 1 and {long[0], tuple(-x for x in long[0])} & {(0, 2, 2)}
    with pytest.raises(ValueError):
        lattice_length(((0, 0), (Fraction(1, 2), 1)))


def test_cayley_sum():
    pt = poly([(0,)])
    assert cayley_sum([pt]).vertices == ((0, 1),)
    seg = poly([(0,), (1,)])
    Q = cayley_sum([seg, seg])
    assert set(Q.vertices) == {(0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1)}
    segs = [poly([(0, 0), (1, 0)]), poly([(0, 0), (0, 1)]), poly([(0, 0), (1, 1)])]
    C = cayley_sum(segs)
    assert C.dim == 4 and C.n_vertices == 6
    assert sorted({v[2:] for v in C.vertices}) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    with pytest.raises(ValueError):
        cayley_sum([])


def test_lattice_points_examples():
    assert len(lattice_points(poly([(0, 0), (1, 0), (0, 1), (1, 1)]))) == 4
    assert len(lattice_points(standard_simplex(2, 2))) == 6
    assert len(lattice_points(catalog.triangle_n())) == 10


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-10, 10), st.integers(-10, 10), st.integers(-3, 3)), min_size=1, max_size=6))
def test_lattice_points_against_box_scan(pts):
    P = LatticePolytope.from_vertices(pts, 3)
    assert lattice_points(P) == box_scan(P)


def test_lattice_points_both_backends(backend):
    P = poly([(-3, -2, -1), (4, 0, 1), (0, 5, -2), (1, 1, 4)])
    assert lattice_points(P) == box_scan(P)


def test_lattice_isomorphism():
    prism = polytope_product(standard_simplex(2), standard_simplex(1))
    rng = random.Random(3)
    for _ in range(10):
        g = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(5):
            i, j = rng.sample(range(3), 2)
            c = rng.choice([-1, 1])
            g[i] = [a + c * b for a, b in zip(g[i], g[j])]
        t = [rng.randint(-3, 3) for _ in range(3)]
        image = poly([tuple(sum(a * x for a, x in zip(r, v)) + s for r, s in zip(g, t)) for v in prism.vertices])
        A, c = lattice_isomorphism(prism, image)
        assert {tuple(sum(a * x for a, x in zip(r, v)) + s for r, s in zip(A, c)) for v in prism.vertices} == set(image.vertices)
    # same combinatorics, different lattice volume
    assert lattice_isomorphism(standard_simplex(2), standard_simplex(2, 2)) is None
    assert lattice_isomorphism(standard_simplex(3), poly([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])) is None
    assert lattice_isomorphism(prism, poly(list(product((0, 1), repeat=3)))) is None
    with pytest.raises(ValueError):
        lattice_isomorphism(poly([(0, 0), (1, 1)]), standard_simplex(2))
