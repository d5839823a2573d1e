"""Cracked polytopes, scaffoldings, and smoothings of toric Fano varieties."""
from .errors import *  # noqa: F401,F403
from .lattice import (
    LatticeSplitting,
    hermite_normal_form,
    kernel_basis,
    smith_normal_form,
    solve_integral,
)
from .polytope import (
    LatticePolytope,
    RationalCone,
    cayley_sum,
    dual_face,
    is_unimodular_cone,
    lattice_length,
    lattice_points,
    polar_dual,
    tangent_cone,
)
from .fan import (
    ClassGroup,
    Fan,
    ToricDivisor,
    is_basepoint_free,
    is_nef,
    normal_fan,
    polytope_of_sections,
    product_projective_fan,
    restricted_sections,
    spanning_fan,
    star_fan,
)
from .cracked import check_reflexive, facet_cayley_structure, is_cracked, vertical_faces
from .scaffolding import (
    Scaffolding,
    Shape,
    Strut,
    is_full,
    scaffold_shape_p1,
    search_full_scaffolding,
    validate_scaffolding,
)
from .laurent import AmbientModel, build_ambient, is_smooth_ambient, tangent_cone_ambient, verify_embedding
from .ci import (
    anticanonical_divisor,
    ci_data,
    enumerate_slabs,
    is_positive,
    local_equations,
    singularity_census,
    slab_divisor,
    slab_stratum,
    verify_slab_pullback,
)
from .palp import emit_palp, parse_palp
from .kernels import BACKEND

__version__ = "0.1.0"
