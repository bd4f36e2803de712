"""Random polytopes from uniform points on the sphere: hulls, shadow-vertex LP, and scaling experiments."""

from .analysis import borgwardt_bound, facet_constant, facet_survival_probability, facet_upper_bound, gamma_seq
from .errors import (
    DegenerateGeometryError,
    DegenerateInputError,
    DegenerateSectionError,
    ExperimentAbortedError,
    InsufficientGridError,
    OriginNotInteriorError,
    RandpolyError,
    SingularSystemError,
    ThresholdUnattainableError,
    ValidationError,
)
from .geometry import (
    ball_volume,
    belt_surface,
    belt_volume,
    cap_surface,
    cap_volume,
    cap_volume_asymptotic,
    solve_delta,
    sphere_surface,
)
from .harness import ExperimentConfig, ExperimentRecord, ExponentFit, emit_report, fit_exponent, run_experiment
from .hull import (
    FacetRecord,
    HullStats,
    Polytope,
    beneath_beyond,
    brute_force_facets,
    contains_origin,
    hausdorff_to_sphere,
    vertex_degrees,
)
from .sampler import PointCloud, Seed, sample_polytope, sample_sphere_point
from .shadow import LPInstance, LPSolution, SectionCount, recover_primal, section_edge_count, solve_shadow_vertex

__version__ = "0.1.0"
