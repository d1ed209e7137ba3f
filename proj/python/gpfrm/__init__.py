"""Feature relationship mining via speciated genetic programming."""

from ._core import (
    AggregateRow,
    ConfigError,
    ConvergenceRecord,
    DataError,
    FeatureMatrix,
    FeatureRelationship,
    GpConfig,
    MatchSets,
    RunResult,
    aggregate,
    correlation_matrix,
    load_dataset,
    mae,
    matching_sets,
    pearson,
    rsd,
    run,
    run_batch,
)

__all__ = [
    "AggregateRow",
    "ConfigError",
    "ConvergenceRecord",
    "DataError",
    "FeatureMatrix",
    "FeatureRelationship",
    "GpConfig",
    "MatchSets",
    "RunResult",
    "aggregate",
    "correlation_matrix",
    "load_dataset",
    "mae",
    "matching_sets",
    "pearson",
    "rsd",
    "run",
    "run_batch",
]
