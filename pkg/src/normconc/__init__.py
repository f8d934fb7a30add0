"""Normal distances to convex sets and the concentration bounds they
generate: support-function geometry, Chernoff machinery, model-specific
tail bounds, sample-allocation optimization, and Monte Carlo verification.
"""

from .allocation import (
    AllocationProblem,
    InfeasibleBudgetError,
    exhaustive_allocation,
    link_bound,
    optimize_allocation,
)
from .chernoff import (
    BoundReport,
    BoundedProductModel,
    EmpiricalModel,
    GaussianModel,
    MgfModel,
    MomentChernoffResult,
    ScalarClosedForm,
    Witness,
    chernoff_convex,
    chernoff_halfspace,
    golden_section_min,
    legendre_transform,
    moment_vs_chernoff,
)
from .concentration import (
    CuboidModel,
    DiameterSpec,
    EmpiricalMeanModel,
    GaussianFamily,
    cuboid_bound,
    empirical_mean_bound,
    gaussian_family_bound,
    mcdiarmid_tail,
    orthant_bound,
    portmanteau_bound,
    quadratic_example_bounds,
    spot_check_quasiconvex,
    sublevel_bound,
)
from .geometry import (
    Ball,
    Box,
    ConvexBody,
    CustomPsi,
    DimensionMismatchError,
    DistanceResult,
    EmptyBodyError,
    EuclideanPsi,
    GeometryError,
    HPolytope,
    HalfSpace,
    MaxOfQuadraticsPsi,
    NormalCone,
    PointCloudHull,
    PsiFunctional,
    SmoothSublevel,
    TalagrandResult,
    WeightedQuadraticPsi,
    cuboid_psi,
    distance_to_halfspace,
    empirical_mean_psi,
    ensure_body,
    gaussian_family_psi,
    halfspace_contains,
    hausdorff_distance,
    normal_cone_at,
    normal_distance,
    normal_distance_set_to_set,
    support_function,
    talagrand_distance,
    talagrand_set_distance,
    weighted_hamming,
)
from .verification import (
    EmpiricalMeanSampler,
    EstimateResult,
    GaussianSampler,
    HammingUniform,
    ProductTwoPoint,
    ProductUniform,
    SamplerSpec,
    SharpnessReport,
    Verdict,
    estimate_probability,
    finite_difference_hessian,
    log_equivalence_gap,
    sharpness_diagnostics,
    talagrand_product_check,
    verify_bound,
)

__version__ = "0.1.0"
