from itertools import combinations

import pytest

from cracklat import catalog
from cracklat.ci import (
    anticanonical_divisor,
    ci_data,
    enumerate_slabs,
    f1_class,
    f1_curves,
    is_f1,
    is_positive,
    local_equations,
    singularity_census,
    slab_divisor,
    slab_stratum,
    slab_table,
)
from cracklat.errors import NotReflexiveError, UnboundedError, UnsupportedShapeError
from cracklat.fan import ClassGroup, ToricDivisor, fan_f1, fan_p2, is_basepoint_free
from cracklat.laurent import build_ambient
from cracklat.polytope import LatticePolytope, lattice_points, polar_dual
from cracklat.scaffolding import Scaffolding, Shape, Strut, scaffold_shape_p1
from corpus import catalog_triples, edge_directions, ks_triples


def test_pentagon_ci():
    m = build_ambient(catalog.pentagon_scaffolding())
    ci = ci_data(m)
    assert ci.exponents == ((2, 1),)
    assert ci.multidegrees == ((2, 1),)
    assert ci.theta_image_ok and not ci.degenerate
    for v in m.dual.vertices:
        eq = local_equations(m, v, ci)
        assert eq.n_inequalities == m.dim
        assert all(len(b) >= 1 for b in eq.B)


def test_cube_pair_ci_and_census():
    m = build_ambient(catalog.cube_pair_scaffolding())
    ci = ci_data(m)
    assert ci.exponents == ((1, 1),) * 3
    assert ci.multidegrees == ((1, 1),) * 3
    census = singularity_census(catalog.cube_pair())
    assert census["counts"] == {"smooth": 0, "odp": 12, "other": 0}
    slabs = slab_table(m, ci)
    assert len(slabs) == 12
    assert all(s.bpf for s in slabs)


def test_fig1_census():
    census = singularity_census(catalog.triangle_n())
    assert [(tag, idx) for _, tag, idx in census["cones"]] == [("other", 3)] * 3
    assert singularity_census(catalog.triangle_m())["counts"]["smooth"] == 3


def adjacent_pairs(fan):
    """Independent recount: maximal cones sharing all but one ray (simplicial shape fans)."""
    d = len(next(iter(fan.maximal_cones)))
    return [(a, b) for a, b in combinations(fan.maximal_cones, 2) if len(a & b) == d - 1]


@pytest.mark.parametrize("name", [n for n, _ in catalog_triples()])
def test_slab_count(name):
    S = dict(catalog_triples())[name]
    fan = S.shape.cracking_fan
    # the origin is interior to P°, so every wall meets it in full dimension
    assert len(enumerate_slabs(polar_dual(S.P), fan)) == len(adjacent_pairs(fan))


def test_slab_counts_examples():
    assert len(enumerate_slabs(catalog.triangle_m(), Shape.projective([2]).cracking_fan)) == 3
    S = scaffold_shape_p1(catalog.ks3(15), Shape.p1(edge_directions(catalog.ks3(15))[0]))
    assert len(enumerate_slabs(polar_dual(S.P), S.shape.cracking_fan)) == 1


@pytest.mark.parametrize("name", [n for n, _ in catalog_triples() + ks_triples()])
def test_slab_pullback_and_class_identity(name):
    S = dict(catalog_triples() + ks_triples())[name]
    m = build_ambient(S)
    ci = ci_data(m)
    for s in slab_table(m, ci):  # raises LemmaViolation on a class mismatch
        assert ClassGroup(s.stratum_fan).equivalent(s.induced.coeffs, s.divisor.coeffs)
    rep = anticanonical_divisor(m, ci)
    assert rep.identity


def test_mm2_18_positive():
    m = build_ambient(catalog.mm2_18_scaffolding())
    ci = ci_data(m)
    assert ci.exponents == ((2, 2, 0),)
    assert m.coker_theta() == ((1, 1, 1), 1)
    rep = is_positive(m, ci)
    assert rep.verdict
    f1 = [s for s in rep.slabs if is_f1(s.stratum_fan)]
    assert len(f1) == 1
    s = f1[0]
    assert f1_class(s.divisor) == (2, 0)
    assert is_basepoint_free(s.stratum_fan, s.induced, s.sections)
    assert len(s.sections) == len(lattice_points(s.induced.polytope())) == 6


@pytest.mark.parametrize("palp_id", catalog.NEGATIVE_IDS)
def test_negative_family(palp_id):
    P = catalog.ks3(palp_id)
    u = edge_directions(P)[0]
    S = scaffold_shape_p1(P, Shape.p1(u))
    m = build_ambient(S)
    rep = is_positive(m)
    assert not rep.verdict
    bad = [s for s in rep.slabs if not s.bpf]
    assert len(rep.slabs) == 1 and bad
    s = bad[0]
    D = s.divisor
    if is_f1(s.stratum_fan):
        E, _ = f1_curves(s.stratum_fan)
        assert f1_class(D) == (0, 2)
        assert D.coeffs[E] == 2 and sum(D.coeffs) == 2
    else:
        # twice a curve of negative self-intersection
        (k,) = [i for i, a in enumerate(D.coeffs) if a]
        assert D.coeffs[k] == 2


def test_id15_after_shift():
    P = catalog.cyclic_shift(catalog.ks3(15))
    S = scaffold_shape_p1(P, Shape.p1((0, 1, 1)))
    rep = is_positive(build_ambient(S))
    (s,) = rep.slabs
    assert is_f1(s.stratum_fan) and f1_class(s.divisor) == (0, 2)
    assert not rep.verdict


def test_f1_class_convention():
    F = fan_f1()
    assert f1_curves(F) == (1, 0)
    assert f1_class(ToricDivisor(F, (0, 2, 0, 0))) == (0, 2)
    assert f1_class(ToricDivisor(F, (0, 0, 0, 2))) == (2, 0)
    assert f1_class(ToricDivisor(F, (1, 0, 0, 0))) == (1, -1)
    with pytest.raises(ValueError):
        f1_curves(fan_p2())


def test_slab_divisor_needs_reflexive():
    m = build_ambient(catalog.pentagon_scaffolding())
    s = slab_stratum(m, enumerate_slabs(m.dual, m.cracking_fan)[0])
    P = LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, -3)], 2)
    with pytest.raises(NotReflexiveError):
        slab_divisor(P, s)


def test_ci_needs_product_shape():
    F1 = Shape(fan_f1())
    D = ToricDivisor(F1.fan, (1, 1, 1, 1))
    S = Scaffolding(D.polytope(), F1, [Strut(D, ())])
    m = build_ambient(S)
    with pytest.raises(UnsupportedShapeError):
        ci_data(m)


def test_zero_exponent_row_is_unbounded():
    # a factor on which every strut has degree 0 leaves its coordinates unbounded, so
    # a degenerate exponent table never reaches ci_data
    sh = Shape.projective([1, 1])
    seg = Strut(ToricDivisor(sh.fan, (1, 1, 0, 0)), ())
    S = Scaffolding(LatticePolytope.from_vertices([(-1, 0), (1, 0)], 2), sh, [seg])
    with pytest.raises(UnboundedError):
        build_ambient(S)
