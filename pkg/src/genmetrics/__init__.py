"""Evaluation metrics for generative models of multivariate sequences."""

from .diversity import (
    DiversityResult,
    SamplingPlan,
    acpd,
    apd,
    compare_apd,
    coverage,
    expected_coverage,
    mms,
    mms_real_reference,
    recall,
)
from .errors import GenMetricsError, InputError, NumericalConsistencyError, TensorFormatError
from .fidelity import FidelityResult, Verdict, aog, compare_fid, density, fid, precision
from .latent_stats import (
    GaussianStats,
    NeighborRadii,
    estimate_gaussian,
    knn_radii,
    pairwise_distances,
    bures_term,
    trace_sqrt_product,
)
from .protocol import (
    METRICS,
    MetricReport,
    ProtocolConfig,
    emit_report,
    evaluate,
    generation_plan,
    load_report,
    real_reference_split,
)
from .radar import emit_radar, radar_normalize
from .fixtures import synth_fixture
from .tensor_io import (
    LabelDistribution,
    LatentSet,
    SequenceSet,
    TensorFile,
    average_length,
    label_distribution,
    minmax_normalize,
    read_tensor,
    resample_sequence,
    write_tensor,
)
from .warping import (
    DtwResult,
    WarpingPath,
    WarpingVerdict,
    classify_wpd,
    dtw,
    path_diagonal_deviation,
    wpd,
)

__version__ = "0.1.0"
