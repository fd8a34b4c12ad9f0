"""Finite convex geometries, their meet-distributive lattices, and the incidence Hopf algebra."""

from .constructions import (
    FinitePoset,
    PointConfiguration,
    boolean_geometry,
    chain_geometry,
    convex_position_points,
    convex_shelling,
    empty_geometry,
    point_geometry,
    point_in_hull,
    poset_shelling,
)
from .geomops import geometry_from_lattice, minor, product_geometry
from .hopf import (
    HopfVector,
    TensorVector,
    antipode_chain,
    antipode_recursive,
    coproduct,
    counit,
    has_forbidden_minor,
    multiply,
    verify_hopf_axiom,
)
from .lattice import (
    CanonicalKey,
    FiniteLattice,
    canonical_key,
    direct_product,
    interval,
    is_boolean,
    is_distributive,
    is_meet_distributive,
    lattice_of_closed_sets,
)
from .setfam import (
    AxiomViolation,
    ConvexGeometry,
    GroundSet,
    check_antiexchange,
    closure,
    validate_family,
)

__version__ = "0.1.0"
