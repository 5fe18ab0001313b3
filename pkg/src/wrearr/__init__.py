"""Weighted rearrangement calculus for desk-scale operator algebras.

Singular value functions, weighted trace functionals, weighted decreasing
rearrangements and Orlicz/Lp norms computed by two independent routes, with
the equalities between the routes wired in as checkable properties.
"""

from .algebra import (
    Algebra,
    Operator,
    Projection,
    absolute,
    apply_function,
    partial_isometry_conjugates,
    singular_value_function,
    spectral_projection,
)
from .errors import (
    CrossRouteError,
    EigenSolverError,
    InfiniteValueError,
    ParseError,
    ValidationError,
    WrearrError,
)
from .norms import (
    NormSpec,
    OrliczFunction,
    capped,
    cosh_minus_one,
    l_log_l,
    lp_norm,
    luxemburg_norm,
    membership_route_a,
    membership_route_b,
    modular,
    norm_route_a,
    norm_route_b,
    power,
)
from .stepfn import (
    EXPONENTIAL_DENSITY,
    LEBESGUE,
    ExponentialDensity,
    Measure,
    StepFunction,
    distribution,
    ess_sup,
    generalized_inverse,
    integrate,
    rearrange,
    step_add,
    step_equal,
    step_mul,
)
from .weighted import (
    ExpWeight,
    StepWeight,
    Weight,
    WeightedContext,
    cross_route_tolerance,
    weighted_distribution,
    weighted_rearrangement,
    weighted_rearrangement_oracle,
    weighted_trace,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "Operator",
    "Projection",
    "absolute",
    "apply_function",
    "partial_isometry_conjugates",
    "singular_value_function",
    "spectral_projection",
    "CrossRouteError",
    "EigenSolverError",
    "InfiniteValueError",
    "ParseError",
    "ValidationError",
    "WrearrError",
    "NormSpec",
    "OrliczFunction",
    "capped",
    "cosh_minus_one",
    "l_log_l",
    "lp_norm",
    "luxemburg_norm",
    "membership_route_a",
    "membership_route_b",
    "modular",
    "norm_route_a",
    "norm_route_b",
    "power",
    "EXPONENTIAL_DENSITY",
    "LEBESGUE",
    "ExponentialDensity",
    "Measure",
    "StepFunction",
    "distribution",
    "ess_sup",
    "generalized_inverse",
    "integrate",
    "rearrange",
    "step_add",
    "step_equal",
    "step_mul",
    "ExpWeight",
    "StepWeight",
    "Weight",
    "WeightedContext",
    "cross_route_tolerance",
    "weighted_distribution",
    "weighted_rearrangement",
    "weighted_rearrangement_oracle",
    "weighted_trace",
]
