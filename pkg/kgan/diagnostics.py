"""
Finite-difference verification of every differentiable building block.

Each case is a scalar function of one tensor; `run_gradcheck` compares its
reverse-mode gradient with central differences through `grad_check`.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from kgan.autodiff import (
    Tensor,
    bias_add,
    clamp,
    concat,
    conv2d,
    conv_transpose2d,
    elementwise,
    grad_check,
    leaky_relu,
    matmul,
    reshape,
    scale_grad,
    softmax,
)
from kgan.distill import hard_label_loss, soft_label_loss
from kgan.errors import KganError
from kgan.gan import GanModel, build_teacher, discriminator_loss, generator_loss, wgan_generator_loss, wgan_losses
from kgan.nn import ParameterSet, cross_entropy
from kgan.prng import Xorshift64Star

logger = logging.getLogger(__name__)

GRADCHECK_TOLERANCE = 1e-4
NETWORK_COMPONENTS = 24
NETWORK_IMAGE_SIZE = 16
DEFAULT_STEP = 1e-5
# small enough that a perturbation almost never moves a hidden unit across a relu kink
NETWORK_STEP = 1e-7

ScalarFunction = Callable[[Tensor], Tensor]


@dataclass(frozen=True)
class GradcheckCase:
    name: str
    function: ScalarFunction
    point: Tensor
    components: Optional[int] = None
    step: float = DEFAULT_STEP


@dataclass(frozen=True)
class GradcheckResult:
    name: str
    error: float
    tolerance: float = GRADCHECK_TOLERANCE

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.error)) and self.error <= self.tolerance


class _Sampler:
    def __init__(self, seed: int):
        self.rng = Xorshift64Star(seed)

    def normal(self, *shape: int) -> Tensor:
        return Tensor(self.rng.normal_array(int(np.prod(shape))).reshape(shape))

    def uniform(self, low: float, high: float, *shape: int) -> Tensor:
        return Tensor(self.rng.uniform_array(int(np.prod(shape)), low, high).reshape(shape))

    def away_from_zero(self, *shape: int) -> Tensor:
        """Values in +-[0.1, 1], so kinked operations are differentiated off their kinks."""
        magnitude = self.rng.uniform_array(int(np.prod(shape)), 0.1, 1.0)
        signs = np.where(self.rng.uniform_array(magnitude.size, 0.0, 1.0) < 0.5, -1.0, 1.0)
        return Tensor((magnitude * signs).reshape(shape))


def _weighted(weights: Tensor) -> Callable[[Tensor], Tensor]:
    return lambda value: (value * weights).sum()


def _operation_cases(sample: _Sampler) -> List[GradcheckCase]:
    vector = sample.away_from_zero(3, 4)
    other = sample.normal(3, 4)
    weigh = _weighted(sample.normal(3, 4))
    image = sample.normal(2, 3, 5, 5)
    kernel = sample.normal(4, 3, 3, 3)
    bias = sample.normal(4)
    conv_weights = sample.normal(2, 4, 5, 5)
    small = sample.normal(2, 4, 3, 3)
    deconv_kernel = sample.normal(4, 3, 4, 4)
    deconv_weights = sample.normal(2, 3, 6, 6)
    feature_map = sample.normal(2, 4, 3, 3)
    channel_bias_weights = sample.normal(2, 4, 3, 3)
    side = sample.normal(3, 2)
    concat_weights = sample.normal(3, 6)
    reshape_weights = sample.normal(4, 3)
    deconv_bias = sample.normal(3)

    return [
        GradcheckCase("add", lambda x: weigh(x + other), vector),
        GradcheckCase("sub", lambda x: weigh(other - x), vector),
        GradcheckCase("mul", lambda x: weigh(x * other), vector),
        GradcheckCase("neg", lambda x: weigh(-x), vector),
        GradcheckCase("log", lambda x: weigh(elementwise("log", x)), sample.uniform(0.5, 2.0, 3, 4)),
        GradcheckCase("exp", lambda x: weigh(elementwise("exp", x)), vector),
        GradcheckCase("relu", lambda x: weigh(elementwise("relu", x)), vector),
        GradcheckCase("leaky_relu", lambda x: weigh(leaky_relu(x, 0.2)), vector),
        GradcheckCase("sigmoid", lambda x: weigh(elementwise("sigmoid", x)), vector),
        GradcheckCase("tanh", lambda x: weigh(elementwise("tanh", x)), vector),
        GradcheckCase("clamp", lambda x: weigh(clamp(x, -0.55, 0.55)), vector),
        GradcheckCase("abs", lambda x: weigh(elementwise("abs", x)), vector),
        GradcheckCase("matmul", lambda x: matmul(x, other.reshape(4, 3)).sum(), vector),
        GradcheckCase("sum", lambda x: (x * x).sum(), vector),
        GradcheckCase("mean", lambda x: (x * x).mean(), vector),
        GradcheckCase("reshape", lambda x: _weighted(reshape_weights)(reshape(x, (4, 3))), vector),
        GradcheckCase(
            "concat", lambda x: _weighted(concat_weights)(concat([x, side, side], axis=1)), sample.normal(3, 2)
        ),
        GradcheckCase(
            "bias_add", lambda b: _weighted(channel_bias_weights)(bias_add(feature_map, b)), sample.normal(4)
        ),
        GradcheckCase("softmax", lambda x: weigh(softmax(x, 2.0)), vector),
        GradcheckCase("scale_grad", lambda x: weigh(scale_grad(x, 1.0)), vector),
        GradcheckCase("conv2d", lambda x: _weighted(conv_weights)(conv2d(x, kernel, bias, 1, 1)), image),
        GradcheckCase("conv2d.weight", lambda w: _weighted(small)(conv2d(image, w, bias, 2, 1)), kernel),
        GradcheckCase(
            "conv_transpose2d",
            lambda x: _weighted(deconv_weights)(conv_transpose2d(x, deconv_kernel, deconv_bias, 2, 1)),
            feature_map,
        ),
        GradcheckCase(
            "conv_transpose2d.weight",
            lambda w: _weighted(deconv_weights)(conv_transpose2d(feature_map, w, deconv_bias, 2, 1)),
            deconv_kernel,
        ),
    ]


def _probabilities(x: Tensor) -> Tensor:
    return elementwise("sigmoid", x)


def _loss_cases(sample: _Sampler) -> List[GradcheckCase]:
    scores = sample.normal(6)
    fixed = _probabilities(sample.normal(6))
    critic_fixed = sample.normal(6)
    teacher_logits = sample.normal(6, 2)
    targets = softmax(sample.normal(6, 2))
    labels = [1.0, 0.0, 1.0, 1.0, 0.0, 0.0]

    return [
        GradcheckCase("cross_entropy", lambda x: cross_entropy(softmax(x), targets), sample.normal(6, 2)),
        GradcheckCase("generator_loss", lambda x: generator_loss(_probabilities(x)), scores),
        GradcheckCase("discriminator_loss.real", lambda x: discriminator_loss(_probabilities(x), fixed), scores),
        GradcheckCase("discriminator_loss.fake", lambda x: discriminator_loss(fixed, _probabilities(x)), scores),
        GradcheckCase("wgan_critic_loss", lambda x: wgan_losses(x, critic_fixed)[0], scores),
        GradcheckCase("wgan_generator_loss", wgan_generator_loss, scores),
        GradcheckCase("soft_label_loss", lambda x: soft_label_loss(x, teacher_logits, 1.0), sample.normal(6, 2)),
        GradcheckCase(
            "soft_label_loss.t2", lambda x: soft_label_loss(x, teacher_logits, 2.0, scaled=False), sample.normal(6, 2)
        ),
        GradcheckCase("hard_label_loss", lambda x: hard_label_loss(_probabilities(x), labels), scores),
    ]


def _with_parameter(params: ParameterSet, name: str, value: Tensor) -> ParameterSet:
    tensors = dict(params)
    tensors[name] = value
    return ParameterSet(tensors, params.init_seed)


def _network_cases(sample: _Sampler, teacher: GanModel) -> List[GradcheckCase]:
    """One case per network input and one per parameter tensor of both networks."""
    size = teacher.image_size
    if teacher.conditioning == "image":
        inputs = source = sample.uniform(0.0, 1.0, 2, 1, size, size)
    else:
        inputs, source = sample.normal(*teacher.generator_input_shape(2)), None
    candidate = sample.uniform(0.0, 1.0, 2, 1, size, size)
    output_weights = _weighted(sample.normal(2, 1, size, size))
    logit_weights = _weighted(sample.normal(2, 2))

    def generator_weight(name: str) -> ScalarFunction:
        return lambda w: output_weights(teacher.generate(inputs, _with_parameter(teacher.generator_params, name, w)))

    def discriminator_weight(name: str) -> ScalarFunction:
        return lambda w: logit_weights(
            teacher.logits(candidate, source, _with_parameter(teacher.discriminator_params, name, w))
        )

    def case(name: str, function: ScalarFunction, point: Tensor) -> GradcheckCase:
        return GradcheckCase(name, function, point, NETWORK_COMPONENTS, NETWORK_STEP)

    cases = [case("teacher_generator.input", lambda x: output_weights(teacher.generate(x)), inputs)]
    cases += [
        case(f"teacher_generator.{name}", generator_weight(name), value)
        for name, value in teacher.generator_params.items()
    ]
    cases.append(case("teacher_discriminator.input", lambda x: logit_weights(teacher.logits(x, source)), candidate))
    cases += [
        case(f"teacher_discriminator.{name}", discriminator_weight(name), value)
        for name, value in teacher.discriminator_params.items()
    ]
    return cases


def gradcheck_cases(
    seed: int = 0, image_size: int = NETWORK_IMAGE_SIZE, conditioning: str = "image"
) -> List[GradcheckCase]:
    sample = _Sampler(seed)
    teacher = build_teacher(image_size, seed, conditioning=conditioning)
    return _operation_cases(sample) + _loss_cases(sample) + _network_cases(sample, teacher)


def run_gradcheck(
    cases: Optional[Sequence[GradcheckCase]] = None,
    tolerance: float = GRADCHECK_TOLERANCE,
    seed: int = 0,
    image_size: int = NETWORK_IMAGE_SIZE,
    conditioning: str = "image",
) -> List[GradcheckResult]:
    results = []
    for case in gradcheck_cases(seed, image_size, conditioning) if cases is None else cases:
        try:
            error = grad_check(case.function, case.point, case.step, case.components, seed)
        except KganError as failure:
            logger.warning("Gradient check of %s failed: %s", case.name, failure)
            error = float("inf")
        result = GradcheckResult(case.name, error, tolerance)
        logger.debug("%s: max relative error %.3e", case.name, error)
        results.append(result)
    return results


def failed_checks(results: Sequence[GradcheckResult]) -> Dict[str, float]:
    return {result.name: result.error for result in results if not result.passed}


__all__ = [
    "GRADCHECK_TOLERANCE",
    "NETWORK_IMAGE_SIZE",
    "GradcheckCase",
    "GradcheckResult",
    "gradcheck_cases",
    "run_gradcheck",
    "failed_checks",
]
