from .curves import Arc, Polyline, Segment
from .generators import (
    PAIR_KINDS,
    declare_params,
    lollipop_graph,
    lower_bound_pair,
    named_graph,
    segment_graph,
    star_graph,
    worst_case_graph,
)
from .graph import Edge, EmbeddedGraph, estimate_global_reach
from .sampling import (
    TubeModel,
    dist_to_graph,
    grid_sample_dense,
    is_dense,
    sample_noiseless,
    sample_tube,
)

__all__ = [
    "Arc", "Polyline", "Segment", "Edge", "EmbeddedGraph", "TubeModel",
    "PAIR_KINDS", "declare_params", "estimate_global_reach", "lollipop_graph",
    "lower_bound_pair", "named_graph", "segment_graph", "star_graph", "worst_case_graph",
    "dist_to_graph", "grid_sample_dense", "is_dense", "sample_noiseless", "sample_tube",
]
