"""Large-scale propagation, correlated Rician MIMO channels and the
deterministic SINR/throughput approximations used to derive the
distance-switching thresholds of the rate table."""

from .pathloss import (
    PathLossParams,
    friis_reference_db,
    path_loss_db,
    received_power,
)
from .channel import (
    Interferer,
    LinkConfig,
    LosGeometry,
    RicianParams,
    build_channel_sample,
    build_correlation,
    correlation_sqrt,
    steering_matrix,
)
from .covariance import estimation_covariances
from .throughput import (
    ThroughputCurve,
    derive_thresholds,
    expected_throughput,
    throughput_curve,
)

__all__ = [
    "PathLossParams", "friis_reference_db", "path_loss_db", "received_power",
    "RicianParams", "LosGeometry", "Interferer", "LinkConfig",
    "build_correlation", "correlation_sqrt", "steering_matrix",
    "build_channel_sample", "estimation_covariances",
    "ThroughputCurve", "expected_throughput", "throughput_curve",
    "derive_thresholds",
]
