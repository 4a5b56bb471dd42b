"""MSE-based transfer charts and I-MMSE area identities for iterative decoding."""

from .awgn import (
    LN2,
    LN4,
    ConsistencyReport,
    DomainError,
    LlrEnsemble,
    MeasureKind,
    MissingLabelsError,
    binary_entropy,
    consistency_check,
    db_to_linear,
    extract_measure,
    linear_to_db,
    mutual_info_binary,
    phi,
    phi_inverse,
    rng_stream,
    sample_consistent_llr,
    tail_area,
    verify_immse,
)
from .charts import (
    AreaResult,
    ChartPair,
    ExitCurve,
    MatchingReport,
    MmseSnrCurve,
    Trajectory,
    TransferCurve,
    area,
    default_snr_grid,
    ebn0_db_to_gamma,
    exit_curve_from_mse,
    matching_gap,
    rate_from_area,
    repetition_curve,
    repetition_transfer_curve,
    threshold,
    to_mmse_vs_snr,
    trajectory,
)
from .decoders import (
    ConvCodeSpec,
    DegreeProfile,
    InnerChannelSpec,
    TransferPoint,
    Trellis,
    bcjr_extrinsic,
    brute_force_app,
    check_node_mmse_ext,
    check_node_transfer,
    codebook,
    conv_mmse_curve,
    conv_transfer_point,
    encode,
    encode_batch,
    max_llr_deviation,
    regular_profile,
    repetition_transfer,
    uncoded_inner_curve,
    vnd_transfer,
)

__version__ = "0.1.0"
