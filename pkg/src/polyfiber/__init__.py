"""polyfiber: exact fiber topology of real bivariate polynomials.

Newton polygons and branches at infinity, constructible-function branch
counts with Euler integration, gradient degree at infinity, Jacobian-pair
certificates, and a Poincare-disc phase-portrait tracer.
"""

from .laurent import (
    LaurentPoly,
    NotDivisible,
    ParseError,
    parse,
    poly_from_json,
    poly_to_json,
    partial,
    jacobian_det,
    exact_divide,
    highest_part,
    weighted_decomposition,
    substitute_affine,
)
from .polygon import (
    NewtonPolygon,
    OuterEdge,
    newton_polygon,
    is_convenient,
    outer_edges,
    edge_poly,
    edge_factorization,
    is_nondegenerate,
    is_nondegenerate_on,
    monomial_substitution,
    interior_lattice_points,
)
from .branchcount import (
    ConstructibleFn,
    SpecialEdgeReport,
    classify_special_edge,
    make_convenient,
    n_function,
    ns_at,
    ns_nondegenerate,
    numeric_component_count,
    splitting_reduction,
)
from .eulercalc import (
    DegreeAtInfinityReport,
    degree_at_infinity,
    euler_integral,
    sekalski_check,
    submersion_euler_check,
)
from .matecheck import (
    MateCertificate,
    MateVerdict,
    build_degree7,
    no_mate_certifier,
    verify_bezout,
    verify_pair,
)
from .hamtrace import compactify, hamiltonian_field, trace_portrait
from .resultants import certify_submersion

__version__ = "0.1.0"
