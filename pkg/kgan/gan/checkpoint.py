import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from kgan.autodiff import Tensor
from kgan.errors import CheckpointError, KganError
from kgan.nn import ParameterSet
from .models import GanModel, discriminator_specs, generator_specs
from .optim import OptimizerState

SIDECAR_NAME = "checkpoint.json"
GENERATOR_FILE = "generator.kgp"
DISCRIMINATOR_FILE = "discriminator.kgp"
OPTIMIZER_FILE = "optimizer.kgp"
REQUIRED_KEYS = ("mode", "conditioning", "image_size", "scale", "seed", "latent_dim")


def _state_tensors(role: str, state: Optional[OptimizerState]) -> Dict[str, Tensor]:
    if state is None:
        return {}
    tensors = {f"{role}.first.{name}": Tensor(value) for name, value in state.first_moments.items()}
    tensors.update({f"{role}.second.{name}": Tensor(value) for name, value in state.second_moments.items()})
    return tensors


def _state_from(role: str, tensors: ParameterSet, step: Optional[int]) -> Optional[OptimizerState]:
    if step is None:
        return None
    state = OptimizerState(step)
    for name, tensor in tensors.items():
        owner, moment, parameter = name.split(".", 2)
        if owner != role:
            continue
        target = state.first_moments if moment == "first" else state.second_moments
        target[parameter] = np.array(tensor.data)
    return state


def save_checkpoint(model: GanModel, directory: Union[str, Path]) -> Path:
    """Writes both parameter sets, the optimizer moments and the `checkpoint.json` sidecar."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    model.generator_params.save(root / GENERATOR_FILE)
    model.discriminator_params.save(root / DISCRIMINATOR_FILE)

    states = {"generator": model.generator_state, "discriminator": model.discriminator_state}
    moments: Dict[str, Tensor] = {}
    for role, state in states.items():
        moments.update(_state_tensors(role, state))
    ParameterSet(moments).save(root / OPTIMIZER_FILE)

    sidecar = {
        "mode": model.mode,
        "conditioning": model.conditioning,
        "image_size": model.image_size,
        "scale": model.scale,
        "seed": model.seed,
        "latent_dim": model.latent_dim,
        "generator_file": GENERATOR_FILE,
        "discriminator_file": DISCRIMINATOR_FILE,
        "optimizer_state_file": OPTIMIZER_FILE,
        "optimizer_steps": {role: (state.step if state else None) for role, state in states.items()},
    }
    path = root / SIDECAR_NAME
    path.write_text(json.dumps(sidecar, indent=2) + "\n")
    return path


def _read_sidecar(path: Path) -> Dict[str, Any]:
    if not path.is_file():
        raise CheckpointError(path=str(path), reason="file does not exist")
    try:
        sidecar = json.loads(path.read_text())
    except ValueError as error:
        raise CheckpointError(path=str(path), reason=f"invalid json ({error})") from error
    missing = [key for key in REQUIRED_KEYS if key not in sidecar]
    if missing:
        raise CheckpointError(path=str(path), reason=f"missing keys {missing}")
    return sidecar


def load_checkpoint(directory: Union[str, Path]) -> GanModel:
    root = Path(directory)
    sidecar = _read_sidecar(root / SIDECAR_NAME)
    size, scale = int(sidecar["image_size"]), float(sidecar["scale"])
    conditioning, latent_dim = sidecar["conditioning"], int(sidecar["latent_dim"])

    g_params = ParameterSet.load(root / sidecar.get("generator_file", GENERATOR_FILE))
    d_params = ParameterSet.load(root / sidecar.get("discriminator_file", DISCRIMINATOR_FILE))
    moments = ParameterSet.load(root / sidecar.get("optimizer_state_file", OPTIMIZER_FILE))
    steps = sidecar.get("optimizer_steps", {})

    try:
        return GanModel(
            generator_spec=generator_specs(size, scale, conditioning, latent_dim),
            generator_params=g_params,
            discriminator_spec=discriminator_specs(size, scale, conditioning),
            discriminator_params=d_params,
            image_size=size,
            mode=sidecar["mode"],
            conditioning=conditioning,
            scale=scale,
            seed=int(sidecar["seed"]),
            latent_dim=latent_dim,
            generator_state=_state_from("generator", moments, steps.get("generator")),
            discriminator_state=_state_from("discriminator", moments, steps.get("discriminator")),
        )
    except KganError as error:
        raise CheckpointError(path=str(root), reason=str(error)) from error


__all__ = [
    "SIDECAR_NAME",
    "save_checkpoint",
    "load_checkpoint",
]
