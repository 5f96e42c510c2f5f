"""
Arithmetic coding driven by pseudo-deterministic next-bits predictors.
"""

__version__ = "0.3.1"

from .codec import NextBitCodec, decode, encode, robustify_decode, robustify_encode
from .container import deserialize, serialize
from .errors import (
    CodingError,
    ConfigError,
    InvalidLength,
    MalformedEncoding,
    SupportTooLarge,
    VectorMismatch,
    ZeroMassPrefix,
)
from .harness import ExperimentRunner
from .models import (
    Advice,
    BitString,
    Encoding,
    ExperimentConfig,
    PredictorParams,
    SourceSpec,
    TrialReport,
)

__all__ = [
    "__version__",
    "NextBitCodec",
    "encode",
    "decode",
    "robustify_encode",
    "robustify_decode",
    "serialize",
    "deserialize",
    "ExperimentRunner",
    "Advice",
    "BitString",
    "Encoding",
    "ExperimentConfig",
    "PredictorParams",
    "SourceSpec",
    "TrialReport",
    "CodingError",
    "ConfigError",
    "InvalidLength",
    "MalformedEncoding",
    "SupportTooLarge",
    "VectorMismatch",
    "ZeroMassPrefix",
]
