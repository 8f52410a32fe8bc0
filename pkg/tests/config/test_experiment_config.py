import json
from os import path

import pytest

from kgan.config import CONFIG_NAME, SEED_OVERRIDE_VARIABLE, load_config, parse_config
from kgan.distill import DistillConfig
from kgan.errors import AdditionalPropertiesValidationError, ConfigError, PropertyValueValidationError
from kgan.gan import TrainingConfig

FIXTURES = path.dirname(__file__) + "/../fixtures"


def test_defaults() -> None:
    config = load_config(environ={})

    assert config.data.size == 16
    assert config.data.n_pairs == 300
    assert config.data.train_fraction == pytest.approx(2 / 3)
    assert config.data.output_dir == "runs/data"
    assert config.teacher.training_config() == TrainingConfig()
    assert config.student.distill_config() == DistillConfig()
    assert config.teacher.output_dir == "runs/teacher"
    assert config.student.output_dir == "runs/student"
    assert config.eval.samples == 0


@pytest.mark.parametrize("name", ["experiment.yml", "experiment.json"])
def test_load_config_file(name: str) -> None:
    config = load_config(f"{FIXTURES}/{name}", environ={})

    assert config.data.size == 8
    assert config.data.n_pairs == 6
    assert config.data.master_seed == 3
    assert config.teacher.mode == "wasserstein"
    assert config.teacher.training_config().batch_size == 2
    assert config.student.distill_config().temperature == 2.0
    assert config.student.scale == 0.25
    assert config.student.batch_size == 8
    assert config.eval.samples == 2


def test_yaml_and_json_resolve_identically() -> None:
    from_yaml = load_config(f"{FIXTURES}/experiment.yml", environ={})
    from_json = load_config(f"{FIXTURES}/experiment.json", environ={})

    assert from_yaml.to_json() == from_json.to_json()


def test_emitted_config_reloads_to_same_document(tmp_path) -> None:
    config = load_config(f"{FIXTURES}/experiment.yml", environ={})

    saved = config.save(tmp_path)
    reloaded = load_config(saved, environ={})

    assert saved.name == CONFIG_NAME
    assert reloaded.to_json() == saved.read_text()
    assert json.loads(saved.read_text())["teacher"]["d_steps_per_g_step"] is None


def test_seed_override_sets_every_seed() -> None:
    config = parse_config({"teacher": {"seed": 5}}, environ={SEED_OVERRIDE_VARIABLE: "42"})

    assert config.data.master_seed == 42
    assert config.teacher.seed == 42
    assert config.student.seed == 42
    assert config.document["teacher"]["seed"] == 42


@pytest.mark.parametrize("value", ["abc", "-1"])
def test_fail_invalid_seed_override(value: str) -> None:
    with pytest.raises(ConfigError) as error:
        parse_config({}, environ={SEED_OVERRIDE_VARIABLE: value})

    assert SEED_OVERRIDE_VARIABLE in str(error.value)


def test_fail_unknown_key() -> None:
    with pytest.raises(AdditionalPropertiesValidationError) as error:
        parse_config({"teacher": {"epoch": 3}}, environ={})

    assert str(error.value) == "Unknown configuration key `teacher.epoch`."


@pytest.mark.parametrize(
    "document, property_name",
    [
        [{"data": {"size": 12}}, "data.size"],
        [{"data": {"n_pairs": 2}}, "data.n_pairs"],
        [{"data": {"train_fraction": 1.0}}, "data.train_fraction"],
        [{"teacher": {"mode": "hinge"}}, "teacher.mode"],
        [{"teacher": {"d_steps_per_g_step": 0}}, "teacher.d_steps_per_g_step"],
        [{"student": {"scale": 0}}, "student.scale"],
        [{"student": {"augment": "yes"}}, "student.augment"],
    ],
)
def test_fail_invalid_value(document: dict, property_name: str) -> None:
    with pytest.raises(PropertyValueValidationError) as error:
        parse_config(document, environ={})

    assert error.value.property_name == property_name


def test_fail_semantic_error_is_config_error() -> None:
    with pytest.raises(ConfigError) as error:
        parse_config({"student": {"alpha": 0, "beta": 0}}, environ={})

    assert "alpha + beta" in str(error.value)


def test_fail_unparsable_file() -> None:
    with pytest.raises(ConfigError) as error:
        load_config(f"{FIXTURES}/invalid.yml", environ={})

    assert "could not be parsed" in str(error.value)


def test_fail_missing_file(tmp_path) -> None:
    with pytest.raises(ConfigError) as error:
        load_config(tmp_path / "missing.yml", environ={})

    assert "Could not read config file" in str(error.value)


def test_fail_unsupported_extension(tmp_path) -> None:
    config_path = tmp_path / "config.toml"
    config_path.write_text("")

    with pytest.raises(ConfigError):
        load_config(config_path, environ={})


def test_fail_document_that_is_not_a_mapping(tmp_path) -> None:
    config_path = tmp_path / "config.json"
    config_path.write_text("[1, 2]")

    with pytest.raises(ConfigError):
        load_config(config_path, environ={})
