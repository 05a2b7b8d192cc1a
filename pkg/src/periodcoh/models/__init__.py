from .bar import BarComplex, bar_cohomology
from .local import CircleLocalSystem, circle_local_cohomology
from .poly import (
    Element,
    GradedOperator,
    PolyModel,
    TruncationError,
    build_s2_model,
    build_z_model,
    compose,
    compose_D,
    d_dz,
    fiber_integrate_T2,
    inclusion,
    integrate_generator,
    phi_star,
    phi_star_inverse,
    ring_endomorphism,
    s2_phi_action,
    torus_extend,
)
from .simplicial import (
    NormalizedCochains,
    SimplicialSet,
    circle,
    integration_matrix,
    nerve,
    point,
    product_set,
    pullback_matrix,
    simplicial_integration,
    standard_simplex,
)
