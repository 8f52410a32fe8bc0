from typing import Any, Union

import numpy as np

from kgan.autodiff import Tensor, as_tensor, clamped_log, scale_grad
from kgan.errors import DomainError, ShapeError
from kgan.nn import cross_entropy, softmax_t

Scalar = Union[Tensor, float]


def soft_label_loss(student_logits: Tensor, teacher_logits: Tensor, temperature: float, scaled: bool = True) -> Tensor:
    """
    Batch mean of cross_entropy(softmax_t(student_i, T), softmax_t(teacher_i, T)).

    Teacher logits are treated as constants. The returned value is the plain
    cross-entropy; with `scaled` its gradient is multiplied by T**2 so the
    gradient magnitude does not shrink as the temperature grows.
    """
    if temperature <= 0:
        raise DomainError(reason=f"temperature must be positive, got {temperature}")
    if student_logits.shape != teacher_logits.shape or student_logits.data.ndim != 2:
        raise ShapeError(reason=f"logits must share an [m, K] shape, got {list(student_logits.shape)} and "
                         f"{list(teacher_logits.shape)}")

    soft_targets = softmax_t(teacher_logits.detach(), temperature)
    loss = cross_entropy(softmax_t(student_logits, temperature), soft_targets)
    if scaled and temperature != 1.0:
        return scale_grad(loss, temperature * temperature)
    return loss


def hard_label_loss(student_probs: Tensor, labels: Any) -> Tensor:
    """Binary cross-entropy -(1/m) sum [y log p + (1 - y) log(1 - p)], p clamped to [1e-7, 1]."""
    targets = labels if isinstance(labels, Tensor) else as_tensor(labels)
    if student_probs.data.ndim != 1 or targets.shape != student_probs.shape:
        raise ShapeError(reason=f"probabilities {list(student_probs.shape)} and labels {list(targets.shape)} "
                         f"must be equal [m] batches")
    if not np.all((targets.data == 0.0) | (targets.data == 1.0)):
        raise DomainError(reason="hard labels must be 0 or 1")

    positive = targets * clamped_log(student_probs)
    negative = (1.0 - targets) * clamped_log(1.0 - student_probs)
    return -(positive + negative).mean()


def distill_loss(l_soft: Scalar, l_hard: Scalar, cfg: Any) -> Scalar:
    """alpha * l_soft + beta * l_hard with the weights of a DistillConfig."""
    return l_soft * cfg.alpha + l_hard * cfg.beta


__all__ = [
    "soft_label_loss",
    "hard_label_loss",
    "distill_loss",
]
