import numpy as np

from kgan.autodiff import Tensor, clamped_log, conv2d, conv_transpose2d, softmax
from kgan.errors import DomainError, ShapeError

NORMALIZATION_TOLERANCE = 1e-6


def conv2d_forward(input: Tensor, weights: Tensor, bias: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    return conv2d(input, weights, bias, stride, padding)


def deconv2d_forward(input: Tensor, weights: Tensor, bias: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    return conv_transpose2d(input, weights, bias, stride, padding)


def softmax_t(logits: Tensor, temperature: float) -> Tensor:
    """
    Temperature softmax q_i = exp(z_i / T) / sum_j exp(z_j / T) over the last axis.

    T = 1 is the plain softmax, larger temperatures flatten the distribution.
    """
    return softmax(logits, temperature)


def _check_distribution(name: str, value: Tensor) -> None:
    totals = value.data.sum(axis=-1)
    if np.any(value.data < 0.0) or np.any(np.abs(totals - 1.0) > NORMALIZATION_TOLERANCE):
        raise DomainError(reason=f"`{name}` is not a probability distribution along its last axis")


def cross_entropy(pred: Tensor, target: Tensor) -> Tensor:
    """
    -sum(target * log(pred)) with `pred` clamped to [1e-7, 1] before the log.

    Rank-2 inputs are treated as batches of distributions and the batch mean
    is returned.
    """
    if pred.shape != target.shape or pred.data.ndim not in (1, 2):
        raise ShapeError(reason=f"cross entropy needs equal [K] or [m,K] shapes, got {list(pred.shape)} and "
                         f"{list(target.shape)}")
    _check_distribution("pred", pred)
    _check_distribution("target", target)

    total = -(target * clamped_log(pred)).sum()
    if pred.data.ndim == 2:
        return total / pred.shape[0]
    return total


__all__ = [
    "conv2d_forward",
    "deconv2d_forward",
    "softmax_t",
    "cross_entropy",
]
