"""Binary complexity-entropy plane analysis of up/down time series."""

__version__ = "0.1.0"

from .errors import (BicepError, DataFileError, InvalidDistributionError,
                     InvalidInputError, InvariantViolation)
from .sequence import (BinarySequence, BlockDistribution, PriceSeries,
                       SparseStatisticsWarning, binarize, block_distribution,
                       distribution_support_ratio, read_price_csv)
from .measures import (BicepPoint, bicep_point, d_max, inefficiency,
                       jensen_shannon_disequilibrium, normalized_entropy,
                       rank_by_inefficiency, shannon_entropy, statistical_complexity)
from .surrogate import RbfParams, SurrogateVerdict, rbf_generate, shuffle_surrogates
from .randomness import RandomnessReport, randomness_battery
from .calibration import CalibrationCurve, calibrate
from .correlation import (SegmentedCorrelation, correlate_segments,
                          kendall_rank_correlation)

__all__ = [
    "BicepError", "DataFileError", "InvalidDistributionError", "InvalidInputError",
    "InvariantViolation",
    "BinarySequence", "BlockDistribution", "PriceSeries", "SparseStatisticsWarning",
    "binarize", "block_distribution", "distribution_support_ratio", "read_price_csv",
    "BicepPoint", "bicep_point", "d_max", "inefficiency", "jensen_shannon_disequilibrium",
    "normalized_entropy", "rank_by_inefficiency", "shannon_entropy",
    "statistical_complexity",
    "RbfParams", "SurrogateVerdict", "rbf_generate", "shuffle_surrogates",
    "RandomnessReport", "randomness_battery",
    "CalibrationCurve", "calibrate",
    "SegmentedCorrelation", "correlate_segments", "kendall_rank_correlation",
]
