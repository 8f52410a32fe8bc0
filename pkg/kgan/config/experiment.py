import json
import logging
import os
from copy import deepcopy
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional, Union

from kgan.distill import DistillConfig
from kgan.errors import ConfigError, DomainError
from kgan.gan import SUPPORTED_SIZES, TrainingConfig
from ._yaml_support import YAMLError, load_yaml
from .schema import build_validator_for

logger = logging.getLogger(__name__)

CONFIG_NAME = "config.json"
SEED_OVERRIDE_VARIABLE = "KGAN_SEED_OVERRIDE"

FILE_LOADERS = {
    "yaml": load_yaml,
    "yml": load_yaml,
    "json": json.loads,
}


def _training_properties(output_dir: str) -> Dict[str, Any]:
    return {
        "mode": {"type": "string", "enum": ["standard", "wasserstein"], "default": "standard"},
        "conditioning": {"type": "string", "enum": ["image", "noise"], "default": "image"},
        "epochs": {"type": "integer", "minimum": 0, "default": 10},
        "batch_size": {"type": "integer", "minimum": 1, "default": 8},
        "learning_rate_g": {"type": "number", "exclusiveMinimum": 0, "default": 2e-4},
        "learning_rate_d": {"type": "number", "exclusiveMinimum": 0, "default": 2e-4},
        "optimizer": {"type": "string", "enum": ["sgd", "adam"], "default": "adam"},
        "beta1": {"type": "number", "minimum": 0, "exclusiveMaximum": 1, "default": 0.9},
        "beta2": {"type": "number", "minimum": 0, "exclusiveMaximum": 1, "default": 0.999},
        "eps": {"type": "number", "exclusiveMinimum": 0, "default": 1e-8},
        "clip_w": {"type": "number", "exclusiveMinimum": 0, "default": 0.01},
        "seed": {"type": "integer", "minimum": 0, "default": 0},
        "d_steps_per_g_step": {"type": ["integer", "null"], "minimum": 1, "default": None},
        "reconstruction_weight": {"type": "number", "minimum": 0, "default": 0.0},
        "augment": {"type": "boolean", "default": True},
        "latent_dim": {"type": "integer", "minimum": 1, "default": 16},
        "output_dir": {"type": "string", "default": output_dir},
    }


def _section(properties: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "properties": properties, "additionalProperties": False, "default": {}}


EXPERIMENT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "data": _section(
            {
                "size": {"type": "integer", "enum": list(SUPPORTED_SIZES), "default": 16},
                "n_pairs": {"type": "integer", "minimum": 3, "default": 300},
                "master_seed": {"type": "integer", "minimum": 0, "default": 0},
                "train_fraction": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 2 / 3},
                "output_dir": {"type": "string", "default": "runs/data"},
            }
        ),
        "teacher": _section(_training_properties("runs/teacher")),
        "student": _section(
            {
                **_training_properties("runs/student"),
                "temperature": {"type": "number", "exclusiveMinimum": 0, "default": 4.0},
                "alpha": {"type": "number", "minimum": 0, "default": 0.7},
                "beta": {"type": "number", "minimum": 0, "default": 0.3},
                "gamma": {"type": "number", "minimum": 0, "default": 1.0},
                "scale": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 0.5},
            }
        ),
        "eval": _section(
            {
                "output_dir": {"type": "string", "default": "runs/eval"},
                "samples": {"type": "integer", "minimum": 0, "default": 0},
            }
        ),
    },
}

validate_experiment = build_validator_for(EXPERIMENT_SCHEMA)


@dataclass(frozen=True)
class DataSection:
    size: int
    n_pairs: int
    master_seed: int
    train_fraction: float
    output_dir: str


@dataclass(frozen=True)
class TrainSection:
    mode: str
    conditioning: str
    epochs: int
    batch_size: int
    learning_rate_g: float
    learning_rate_d: float
    optimizer: str
    beta1: float
    beta2: float
    eps: float
    clip_w: float
    seed: int
    d_steps_per_g_step: Optional[int]
    reconstruction_weight: float
    augment: bool
    latent_dim: int
    output_dir: str

    def training_config(self) -> TrainingConfig:
        names = {item.name for item in fields(TrainingConfig)}
        return TrainingConfig(**{key: value for key, value in vars(self).items() if key in names})


@dataclass(frozen=True)
class StudentSection(TrainSection):
    temperature: float
    alpha: float
    beta: float
    gamma: float
    scale: float

    def distill_config(self) -> DistillConfig:
        return DistillConfig(self.temperature, self.alpha, self.beta, self.gamma, self.scale)


@dataclass(frozen=True)
class EvalSection:
    output_dir: str
    samples: int


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Resolved experiment configuration.

    `document` is the validated JSON document with every default filled in;
    it is what `to_json` emits, so a run can be reproduced from the copy
    written next to its outputs.
    """

    document: Dict[str, Any]
    data: DataSection
    teacher: TrainSection
    student: StudentSection
    eval: EvalSection

    def to_json(self) -> str:
        return json.dumps(self.document, indent=2) + "\n"

    def save(self, directory: Union[str, Path]) -> Path:
        path = Path(directory) / CONFIG_NAME
        path.write_text(self.to_json())
        return path


def _seed_override(document: Dict[str, Any], raw: str) -> None:
    try:
        seed = int(raw)
    except ValueError as error:
        raise ConfigError(
            "{variable} must be an integer, got `{value}`.", variable=SEED_OVERRIDE_VARIABLE, value=raw
        ) from error
    if seed < 0:
        raise ConfigError("{variable} must be >= 0, got `{value}`.", variable=SEED_OVERRIDE_VARIABLE, value=raw)

    logger.info("Overriding every seed with %d", seed)
    document["data"]["master_seed"] = seed
    document["teacher"]["seed"] = seed
    document["student"]["seed"] = seed


def parse_config(document: Any, environ: Optional[Dict[str, str]] = None) -> ExperimentConfig:
    environ = os.environ if environ is None else environ
    resolved = validate_experiment(deepcopy({} if document is None else document))
    if environ.get(SEED_OVERRIDE_VARIABLE):
        _seed_override(resolved, environ[SEED_OVERRIDE_VARIABLE])

    config = ExperimentConfig(
        document=resolved,
        data=DataSection(**resolved["data"]),
        teacher=TrainSection(**resolved["teacher"]),
        student=StudentSection(**resolved["student"]),
        eval=EvalSection(**resolved["eval"]),
    )
    try:
        config.teacher.training_config()
        config.student.training_config()
        config.student.distill_config()
    except DomainError as error:
        raise ConfigError("{reason}", reason=str(error)) from error

    return config


def load_config(path: Optional[Union[str, Path]] = None, environ: Optional[Dict[str, str]] = None) -> ExperimentConfig:
    if path is None:
        return parse_config({}, environ)

    path = Path(path)
    extension = path.suffix[1:].lower()
    if extension not in FILE_LOADERS:
        raise ConfigError(
            "Unsupported config file `{path}`, expected one of: {formats}.", path=path, formats=", ".join(FILE_LOADERS)
        )

    try:
        text = path.read_text()
    except OSError as error:
        raise ConfigError("Could not read config file `{path}`: {reason}.", path=path, reason=error.strerror) from error

    try:
        document = FILE_LOADERS[extension](text)
    except (ValueError, YAMLError) as error:
        raise ConfigError("Config file `{path}` could not be parsed: {reason}.", path=path, reason=error) from error

    return parse_config(document, environ)


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
    "load_config",
    "parse_config",
]
