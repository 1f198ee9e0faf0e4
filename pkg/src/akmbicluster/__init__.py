"""Alternating k-means biclustering toolkit.

Partitions the rows and columns of a data matrix into k paired biclusters by
minimizing the average dimensionality-normalized residual of each row
against a center defined on its bicluster's columns. Ships with a two-block
Gaussian simulation harness, misclassification metrics, an elbow-curve
helper for choosing k, and a batch CLI.
"""

__version__ = "0.1.0"

from .engine import (
    AkmConfig,
    BiclusterResult,
    FitFailedError,
    RestartRequired,
    akm_fit,
    akm_single_run,
    assign_rows,
    column_phase,
    row_phase,
    update_centers,
)
from .kmeans import EmptyClusterError, KMeansConfig, lloyd_kmeans, within_cluster_ss
from .loss import (
    CenterSet,
    LossReport,
    dn_norm_sq,
    empirical_risk,
    penalized_loss,
)
from .matrix import DataMatrix, IndexSet, Partition, frobenius_sq, project, submatrix, transpose
from .metrics import (
    ElbowCurve,
    LabelAlignment,
    align_labels,
    elbow_curve,
    entry_misclassification_rate,
    sample_misclassification_rate,
)
from .simulate import (
    SETTINGS,
    BlockModelSpec,
    LabeledMatrix,
    block_matrices,
    generate,
)
from .bench import BenchPlan, BenchReport, MethodSpec, run_bench

__all__ = [
    "__version__",
    "AkmConfig",
    "BiclusterResult",
    "FitFailedError",
    "RestartRequired",
    "akm_fit",
    "akm_single_run",
    "assign_rows",
    "column_phase",
    "row_phase",
    "update_centers",
    "EmptyClusterError",
    "KMeansConfig",
    "lloyd_kmeans",
    "within_cluster_ss",
    "CenterSet",
    "LossReport",
    "dn_norm_sq",
    "empirical_risk",
    "penalized_loss",
    "DataMatrix",
    "IndexSet",
    "Partition",
    "frobenius_sq",
    "project",
    "submatrix",
    "transpose",
    "ElbowCurve",
    "LabelAlignment",
    "align_labels",
    "elbow_curve",
    "entry_misclassification_rate",
    "sample_misclassification_rate",
    "SETTINGS",
    "BlockModelSpec",
    "LabeledMatrix",
    "block_matrices",
    "generate",
    "BenchPlan",
    "BenchReport",
    "MethodSpec",
    "run_bench",
]
