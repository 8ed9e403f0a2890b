"""Fréchet-distance-preserving random linear maps for polygonal curves."""
from .cluster import ClusteringResult, clustering_cost, kl_center, kl_median, kl_median_cost, median_sandwich_check
from .curves import (
    Curve,
    Interval,
    Segment,
    ball_segment_intersection,
    make_curve,
    point_on_segment,
    point_segment_distance,
    subcurve,
)
from .datasets import Dataset, generate, load_dataset
from .embed import (
    CertReport,
    EmbeddingJob,
    LinearMap,
    apply_map,
    augmentation_lower,
    augmentation_upper,
    certify_embedding,
    certify_inner_products,
    certify_point_line,
    embed_curve_set,
    sample_map,
    target_dimension,
)
from .errors import *  # noqa: F401,F403
from .frechet import (
    FreeSpaceDiagram,
    PredicateId,
    ValidSequence,
    build_free_space,
    critical_values,
    decide_frechet,
    decide_weak_frechet,
    discrete_frechet,
    eval_predicate,
    eval_predicate_system,
    extract_realizing_sequence,
    frechet_distance,
    weak_frechet_distance,
)
from .simplify import SimplificationGraph, build_simplification_graph, min_bottleneck_path, simplify, simplify_curve

__version__ = "0.1.0"
