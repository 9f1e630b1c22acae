"""Sampling-based neural decoding of stabilizer codes, with matching and
maximum-likelihood baselines and a Monte Carlo evaluation harness."""

from .baselines import (
    DefectSet,
    MinWeightNotFound,
    SizeGuardExceeded,
    exact_ml_decode,
    min_weight_decode,
    ml_class_probabilities,
    mwpm_decode,
    mwpm_decode_zonly,
    torus_distance,
)
from .codes import (
    CodeParseError,
    CodeValidationError,
    LogicalClass,
    StabilizerCode,
    build_toric,
    load_code,
    logical_class,
    save_code,
    syndrome,
    syndrome_batch,
    validate_code,
)
from .gf2 import BitMatrix, BitVec, gf2_matvec, gf2_matvec_bits, gf2_rank, symplectic_product
from .harness import ConfigError, EvalRecord, RunConfig, parse_config
from .mlp import (
    MlpConfig,
    MlpDecoderNet,
    ModelFormatError,
    ModelValidationError,
    bce_loss,
    forward,
    gradients,
    init_net,
    load_model,
    lr_schedule,
    save_model,
    train,
    train_step,
)
from .noise import (
    DepolarizationModel,
    NoiseStats,
    empirical_syndrome_stats,
    flip_rate,
    normalize_syndrome,
    sample_error,
    sample_error_bits,
    stats_for_code,
    syndrome_stats,
    training_stream,
)
from .sampler import (
    GIVE_UP,
    MESSAGE_PASSING,
    NAIVE,
    SUCCESS,
    DecodeOutcome,
    decode,
    decode_z_only,
    sample_candidate,
)

__all__ = [
    "BitMatrix",
    "BitVec",
    "CodeParseError",
    "CodeValidationError",
    "ConfigError",
    "DecodeOutcome",
    "DefectSet",
    "DepolarizationModel",
    "EvalRecord",
    "GIVE_UP",
    "LogicalClass",
    "MESSAGE_PASSING",
    "MinWeightNotFound",
    "MlpConfig",
    "MlpDecoderNet",
    "ModelFormatError",
    "ModelValidationError",
    "NAIVE",
    "NoiseStats",
    "RunConfig",
    "SUCCESS",
    "SizeGuardExceeded",
    "StabilizerCode",
    "bce_loss",
    "build_toric",
    "decode",
    "decode_z_only",
    "empirical_syndrome_stats",
    "exact_ml_decode",
    "flip_rate",
    "forward",
    "gf2_matvec",
    "gf2_matvec_bits",
    "gf2_rank",
    "gradients",
    "init_net",
    "load_code",
    "load_model",
    "logical_class",
    "lr_schedule",
    "min_weight_decode",
    "ml_class_probabilities",
    "mwpm_decode",
    "mwpm_decode_zonly",
    "normalize_syndrome",
    "parse_config",
    "sample_candidate",
    "sample_error",
    "sample_error_bits",
    "save_code",
    "save_model",
    "stats_for_code",
    "symplectic_product",
    "syndrome",
    "syndrome_batch",
    "syndrome_stats",
    "train",
    "train_step",
    "training_stream",
    "validate_code",
    "torus_distance",
]

__version__ = "0.1.0"
