"""Training-free temporal segmentation by dynamic graph embedding.

A sequence of per-frame feature vectors is turned into a similarity graph
and a low-dimensional embedding that are refined jointly, alternating an
embedding fit with temporal and semantic graph priors.  Event boundaries
are then read off the learnt embedding.
"""

from .boundary import boundary_scores, context_predict, detect_boundaries, segment_embedding
from .core import DgeState, Hyperparams, ParameterError, labels_to_boundaries, validate_params
from .dge import KmeansResult, StageError, embedding_update, graph_update, kmeans, run_dge
from .embed import (
    LossReport,
    ObjectiveSpec,
    QuadraticObjective,
    bb_minimize,
    ce_grad,
    ce_loss,
    ce_value_and_grad,
    init_embedding,
    pca_project,
)
from .graph import (
    cosine_affinity,
    local_average,
    make_bump_kernel,
    semantic_shrink,
    temporal_shrink,
)
from .metrics import PRF, clustering_accuracy, match_boundaries, nmi, prf_at_tolerance, prf_report
from .preprocess import nl_weights, nlmeans_1d, normalize_features
from .synth import SynthConfig, expected_segment_length, gen_markov_gaussian

__version__ = "0.1.0"

__all__ = [
    "bb_minimize",
    "boundary_scores",
    "ce_grad",
    "ce_loss",
    "ce_value_and_grad",
    "clustering_accuracy",
    "context_predict",
    "cosine_affinity",
    "detect_boundaries",
    "DgeState",
    "embedding_update",
    "expected_segment_length",
    "gen_markov_gaussian",
    "graph_update",
    "Hyperparams",
    "init_embedding",
    "kmeans",
    "KmeansResult",
    "labels_to_boundaries",
    "local_average",
    "LossReport",
    "make_bump_kernel",
    "match_boundaries",
    "nl_weights",
    "nlmeans_1d",
    "nmi",
    "normalize_features",
    "ObjectiveSpec",
    "ParameterError",
    "pca_project",
    "PRF",
    "prf_at_tolerance",
    "prf_report",
    "QuadraticObjective",
    "run_dge",
    "segment_embedding",
    "semantic_shrink",
    "StageError",
    "SynthConfig",
    "temporal_shrink",
    "validate_params",
]
