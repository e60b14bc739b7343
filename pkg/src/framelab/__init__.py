"""Finite frames: complement property, spark, Naimark complements and phase retrieval.

Decisions come with certificates: PASS results name the criterion that
backs them, FAIL results carry a witness that can be checked by hand.
"""

from .augmentation import augment_to_cp, complete_hyperplane_family, direct_sum_augment, is_admissible_next
from .certificates import Certificate, PartitionCertificate, PRCertificate
from .frame_model import (
    Subspace,
    SubspaceFamily,
    VectorFamily,
    analysis_matrix,
    canonical_tight_transform,
    dual_riesz_basis,
    frame_bounds,
    frame_operator,
    gram_matrix,
    is_parseval,
    riesz_bounds,
)
from .naimark import naimark_complement, verify_naimark_pair
from .numerics import DEFAULT_TOL, ToleranceConfig
from .phase_retrieval import (
    apply_invertible,
    equimodular_onb,
    norm_retrieval_spanning_check,
    norm_retrieval_subspaces_real,
    norm_retrieval_vectors_real,
    onb_union,
    pr_subspaces_real,
    pr_vectors_complex_necessary,
    pr_vectors_real,
    project_family,
    reconstruct_johnsex,
)
from .riesz_projections import (
    bcps_duality_check,
    construct_full_spark_projection,
    dual_pair_projection,
    full_spark_projection_check,
    riesz_span_independence_dual,
)
from .spark_cp import (
    check_complement_property,
    complement_deficiency,
    cp_augmentation_number,
    cp_blocked_forever,
    hyperplane_partition_scan,
    is_full_spark,
    spark,
)

__version__ = "0.1.0"
