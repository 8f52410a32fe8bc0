import json

import numpy as np
import pytest

from kgan.autodiff import Tensor
from kgan.data import generate_phantom_pair
from kgan.errors import CheckpointError
from kgan.gan import (
    SIDECAR_NAME,
    TrainingConfig,
    build_student,
    build_teacher,
    load_checkpoint,
    save_checkpoint,
    train_gan,
)


def test_save_checkpoint_writes_sidecar(tmp_path) -> None:
    model = build_student(8, 3, mode="wasserstein")

    path = save_checkpoint(model, tmp_path / "run")
    sidecar = json.loads(path.read_text())

    assert path.name == SIDECAR_NAME
    assert sidecar["mode"] == "wasserstein"
    assert sidecar["image_size"] == 8
    assert sidecar["scale"] == 0.5
    assert sidecar["seed"] == 3
    assert sidecar["optimizer_steps"] == {"generator": None, "discriminator": None}


def test_checkpoint_round_trip_is_bit_exact(tmp_path) -> None:
    pairs = [generate_phantom_pair(seed, 8, seed) for seed in range(2)]
    model, _ = train_gan(build_teacher(8, 0), pairs, TrainingConfig(epochs=1, batch_size=2))

    save_checkpoint(model, tmp_path)
    restored = load_checkpoint(tmp_path)

    assert restored.generator_params.to_bytes() == model.generator_params.to_bytes()
    assert restored.discriminator_params.to_bytes() == model.discriminator_params.to_bytes()
    assert restored.generator_state.step == model.generator_state.step == 1
    for name, moment in model.generator_state.first_moments.items():
        assert np.array_equal(restored.generator_state.first_moments[name], moment)
    sources = Tensor(np.full((1, 1, 8, 8), 0.5))
    assert np.array_equal(restored.generate(sources).data, model.generate(sources).data)


def test_noise_model_round_trip(tmp_path) -> None:
    model = build_teacher(16, 2, conditioning="noise", latent_dim=4)

    save_checkpoint(model, tmp_path)
    restored = load_checkpoint(tmp_path)

    assert restored.conditioning == "noise"
    assert restored.latent_dim == 4
    assert restored.generator_params == model.generator_params
    assert restored.generator_state is None


def test_fail_load_missing_checkpoint(tmp_path) -> None:
    with pytest.raises(CheckpointError) as error:
        load_checkpoint(tmp_path / "missing")

    assert "does not exist" in str(error.value)
    assert SIDECAR_NAME in str(error.value)


@pytest.mark.parametrize("content", ["not json", json.dumps({"mode": "standard"})])
def test_fail_load_invalid_sidecar(tmp_path, content: str) -> None:
    (tmp_path / SIDECAR_NAME).write_text(content)

    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path)


def test_fail_load_checkpoint_of_other_architecture(tmp_path) -> None:
    save_checkpoint(build_student(8, 0), tmp_path)
    sidecar = json.loads((tmp_path / SIDECAR_NAME).read_text())
    sidecar["scale"] = 1.0
    (tmp_path / SIDECAR_NAME).write_text(json.dumps(sidecar))

    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path)
