from .experiment import (
    CONFIG_NAME,
    EXPERIMENT_SCHEMA,
    FILE_LOADERS,
    SEED_OVERRIDE_VARIABLE,
    DataSection,
    EvalSection,
    ExperimentConfig,
    StudentSection,
    TrainSection,
    load_config,
    parse_config,
)
from .schema import build_validator_for

__all__ = [
    "CONFIG_NAME",
    "EXPERIMENT_SCHEMA",
    "FILE_LOADERS",
    "SEED_OVERRIDE_VARIABLE",
    "DataSection",
    "EvalSection",
    "ExperimentConfig",
    "StudentSection",
    "TrainSection",
    "build_validator_for",
    "load_config",
    "parse_config",
]
