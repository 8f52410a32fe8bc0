from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Union

import numpy as np

from kgan.autodiff import GradientMap, Tensor
from kgan.errors import DomainError, ShapeError
from kgan.nn import ParameterSet

OPTIMIZERS = ("sgd", "adam")


@dataclass(frozen=True)
class OptimizerConfig:
    name: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.name not in OPTIMIZERS:
            raise DomainError(reason=f"optimizer must be one of {list(OPTIMIZERS)}, got `{self.name}`")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0) or self.eps <= 0:
            raise DomainError(reason="adam needs 0 <= beta < 1 and eps > 0")


@dataclass
class OptimizerState:
    """Adam moments of one parameter set; `step` counts applied updates."""

    step: int = 0
    first_moments: Dict[str, np.ndarray] = field(default_factory=dict)
    second_moments: Dict[str, np.ndarray] = field(default_factory=dict)

    def copy(self) -> "OptimizerState":
        return OptimizerState(
            self.step,
            {name: value.copy() for name, value in self.first_moments.items()},
            {name: value.copy() for name, value in self.second_moments.items()},
        )


Gradients = Union[GradientMap, Mapping[str, Tensor]]


def _gradient(grads: Gradients, name: str, tensor: Tensor) -> np.ndarray:
    if isinstance(grads, GradientMap):
        if tensor.tracked and tensor in grads:
            return grads[tensor].data
    elif name in grads:
        return grads[name].data
    raise ShapeError(reason=f"no gradient for parameter `{name}`")


def optimizer_step(
    params: ParameterSet,
    grads: Gradients,
    cfg: OptimizerConfig,
    learning_rate: float,
    state: Optional[OptimizerState] = None,
) -> ParameterSet:
    """
    Returns updated, untracked parameters.

    `grads` is either the GradientMap of a graph in which `params` were
    tracked, or a mapping from parameter name to gradient. Adam moments live
    in `state` and are advanced in place, only once every gradient checks out.
    """
    if learning_rate <= 0:
        raise DomainError(reason=f"learning rate must be positive, got {learning_rate}")
    if cfg.name == "adam" and state is None:
        state = OptimizerState()

    # a failed step must leave `state` untouched
    resolved: Dict[str, np.ndarray] = {}
    for name, tensor in params.items():
        grad = _gradient(grads, name, tensor)
        if grad.shape != tensor.shape:
            raise ShapeError(reason=f"gradient {list(grad.shape)} does not match `{name}` {list(tensor.shape)}")
        resolved[name] = grad

    updated: Dict[str, Tensor] = {}
    if state is not None and cfg.name == "adam":
        state.step += 1

    for name, tensor in params.items():
        grad = resolved[name]
        if cfg.name == "sgd":
            updated[name] = Tensor(tensor.data - learning_rate * grad)
            continue

        assert state is not None
        first = cfg.beta1 * state.first_moments.get(name, 0.0) + (1.0 - cfg.beta1) * grad
        second = cfg.beta2 * state.second_moments.get(name, 0.0) + (1.0 - cfg.beta2) * grad * grad
        state.first_moments[name], state.second_moments[name] = first, second
        first_hat = first / (1.0 - cfg.beta1**state.step)
        second_hat = second / (1.0 - cfg.beta2**state.step)
        updated[name] = Tensor(tensor.data - learning_rate * first_hat / (np.sqrt(second_hat) + cfg.eps))

    return ParameterSet(updated, params.init_seed)


__all__ = [
    "OPTIMIZERS",
    "OptimizerConfig",
    "OptimizerState",
    "optimizer_step",
]
