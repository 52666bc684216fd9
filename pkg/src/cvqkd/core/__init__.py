"""
Core simulator components.

This module exports the shared constants, data models, errors, configuration
models and random-stream helpers.
"""

from cvqkd.core.config import (
    CodecSpec,
    SkrParameters,
    SweepConfig,
    load_config_file,
    load_skr_parameters,
    load_sweep_config,
)
from cvqkd.core.constants import db_to_linear, linear_to_db
from cvqkd.core.errors import (
    AlistParseError,
    ConfigurationError,
    DegenerateSegmentError,
    DegenerateStateError,
    DomainError,
    EncodingSetupError,
    ParameterError,
    ProfileError,
    ReconciliationError,
    SearchError,
    ThresholdNotBracketedError,
    UnsupportedDimensionError,
)
from cvqkd.core.models import (
    CapacityEstimate,
    ChannelKind,
    ChannelSample,
    ChannelSpec,
    ClcKind,
    CodecDecision,
    CovarianceSummary,
    DecodeOutcome,
    ExitPoint,
    MappingFunction,
    OrthogonalFamily,
    QucMode,
    Segment,
    SideInfoKind,
    SideInformation,
    SweepTable,
    SystemKind,
    TrialResult,
)
from cvqkd.core.rng import TrialStreams, random_bits, stream_for

__all__ = [
    # Configuration
    "CodecSpec",
    "SweepConfig",
    "SkrParameters",
    "load_config_file",
    "load_sweep_config",
    "load_skr_parameters",
    # Models
    "ChannelKind",
    "ChannelSpec",
    "ChannelSample",
    "ClcKind",
    "QucMode",
    "SystemKind",
    "Segment",
    "OrthogonalFamily",
    "MappingFunction",
    "DecodeOutcome",
    "CodecDecision",
    "ExitPoint",
    "SideInfoKind",
    "SideInformation",
    "TrialResult",
    "CovarianceSummary",
    "CapacityEstimate",
    "SweepTable",
    # Errors
    "ReconciliationError",
    "ParameterError",
    "DegenerateSegmentError",
    "UnsupportedDimensionError",
    "AlistParseError",
    "EncodingSetupError",
    "ProfileError",
    "DomainError",
    "DegenerateStateError",
    "ConfigurationError",
    "SearchError",
    "ThresholdNotBracketedError",
    # Helpers
    "TrialStreams",
    "stream_for",
    "random_bits",
    "db_to_linear",
    "linear_to_db",
]
