"""Biometric template protection: seeded random projection, binary
discriminant analysis toward BCH codeword targets, and fuzzy commitment,
with an enroll/verify/revoke store and an evaluation harness.
"""

from bdatp._core import (
    BenchmarkSpec,
    BinaryTemplate,
    BitVec,
    ClassModel,
    CodeParams,
    Codeword,
    Commitment,
    DuplicateError,
    EnrollResult,
    EnrollSeeds,
    FeatureVector,
    InvalidArgumentError,
    NotFoundError,
    ParseError,
    PerceptronHyper,
    ProjectionKey,
    RealTemplate,
    StageConfig,
    Store,
    TemplateRecord,
    TrainMeta,
    VerifyResult,
    assign_targets,
    bch_decode,
    bch_encode,
    binarize,
    binary_match_score,
    build_code,
    commit,
    deserialize_record,
    distance_ratio,
    enroll_record,
    gen_matrix,
    hamming,
    is_codeword,
    load_features,
    orthonormality_defect,
    project,
    random_codewords,
    real_match_score,
    run_benchmark,
    security_report,
    security_report_from_kc,
    serialize_record,
    synth_classes,
    train_class,
    verify_commitment,
    verify_record,
    write_features,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkSpec",
    "BinaryTemplate",
    "BitVec",
    "ClassModel",
    "CodeParams",
    "Codeword",
    "Commitment",
    "DuplicateError",
    "EnrollResult",
    "EnrollSeeds",
    "FeatureVector",
    "InvalidArgumentError",
    "NotFoundError",
    "ParseError",
    "PerceptronHyper",
    "ProjectionKey",
    "RealTemplate",
    "StageConfig",
    "Store",
    "TemplateRecord",
    "TrainMeta",
    "VerifyResult",
    "assign_targets",
    "bch_decode",
    "bch_encode",
    "binarize",
    "binary_match_score",
    "build_code",
    "commit",
    "deserialize_record",
    "distance_ratio",
    "enroll_record",
    "gen_matrix",
    "hamming",
    "is_codeword",
    "load_features",
    "orthonormality_defect",
    "project",
    "random_codewords",
    "real_match_score",
    "run_benchmark",
    "security_report",
    "security_report_from_kc",
    "serialize_record",
    "synth_classes",
    "train_class",
    "verify_commitment",
    "verify_record",
    "write_features",
]
