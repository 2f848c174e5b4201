"""Topology reconstruction of metric graphs from point samples."""
from .geometry import PointCloud, annulus_query, ball_query, euclidean_dist
from .params import (
    FeasibilityReport,
    InfeasibleParameters,
    ShapeParams,
    alpha_prime,
    check_reconstruction_conditions,
    delta_noiseless,
    delta_tubular,
    expansion_radius,
    f_bound,
    max_feasible_delta,
    sample_size_noiseless,
    sample_size_tubular,
    shell_inner_radius,
    tube_feasibility,
)
from .pseudograph import Pseudograph, is_isomorphic
from .reconstruct import PointLabel, ReconstructionConfig, ReconstructionReport, reconstruct
from .rips import ComponentLabeling, rips_components

__version__ = "0.1.0"

__all__ = [
    "PointCloud", "annulus_query", "ball_query", "euclidean_dist",
    "FeasibilityReport", "InfeasibleParameters", "ShapeParams", "alpha_prime",
    "check_reconstruction_conditions", "delta_noiseless", "delta_tubular", "expansion_radius",
    "f_bound", "max_feasible_delta", "sample_size_noiseless", "sample_size_tubular",
    "shell_inner_radius", "tube_feasibility", "Pseudograph", "is_isomorphic",
    "PointLabel", "ReconstructionConfig", "ReconstructionReport", "reconstruct",
    "ComponentLabeling", "rips_components",
]
