import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from kgan.autodiff import Tensor
from kgan.data import ImagePair
from kgan.errors import DomainError, ModelError
from kgan.gan import (
    AdversarialTrainer,
    Batch,
    GanModel,
    Observer,
    TrainingConfig,
    TrainingHistory,
    mean_absolute_error,
    score,
)
from kgan.nn import ParameterSet
from .losses import distill_loss, hard_label_loss, soft_label_loss

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DistillConfig:
    temperature: float = 4.0
    alpha: float = 0.7
    beta: float = 0.3
    gamma: float = 1.0
    scale: float = 0.5

    def __post_init__(self) -> None:
        if self.temperature <= 0:
            raise DomainError(reason=f"temperature must be positive, got {self.temperature}")
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise DomainError(reason="alpha, beta and gamma must be >= 0")
        if self.alpha + self.beta <= 0:
            raise DomainError(reason="alpha + beta must be positive")
        if not 0.0 < self.scale <= 1.0:
            raise DomainError(reason=f"student scale must be in (0, 1], got {self.scale}")


@dataclass(frozen=True)
class TeacherStudentPair:
    teacher: GanModel
    student: GanModel

    def __post_init__(self) -> None:
        if self.teacher.image_size != self.student.image_size:
            raise ModelError(
                reason=f"teacher works on {self.teacher.image_size}px images, student on {self.student.image_size}px"
            )
        if self.teacher.conditioning != self.student.conditioning:
            raise ModelError(reason="teacher and student must share the generator conditioning")
        if self.teacher.latent_dim != self.student.latent_dim and self.teacher.conditioning == "noise":
            raise ModelError(reason="teacher and student must share the latent dimension")


class DistillationTrainer(AdversarialTrainer):
    """
    Trains the student of a TeacherStudentPair; the teacher is only read.

    Discriminator objective: alpha * L_soft + beta * L_hard, where L_hard is the
    binary cross-entropy of the student's D against the real/fake ground truth
    (the critic loss in wasserstein mode) and L_soft is the temperature softened
    cross-entropy between student and teacher discriminator logits, averaged
    over the real and the generated batch. Generator objective: the adversarial
    generator loss plus gamma * mean|G_student(x) - G_teacher(x)|.
    """

    def __init__(
        self,
        pair: TeacherStudentPair,
        data: Sequence[ImagePair],
        cfg: TrainingConfig,
        dcfg: DistillConfig,
        observer: Optional[Observer] = None,
    ):
        super().__init__(pair.student, data, cfg, observer)
        self.teacher = pair.teacher
        self.dcfg = dcfg

    def hard_label_objective(self, real_logits: Tensor, fake_logits: Tensor) -> Tuple[Tensor, Tensor, Tensor]:
        """Returns (L_hard, D on real, D on fake); real samples carry label 1, generated ones label 0."""
        if self.wasserstein:
            return self.adversarial_loss(real_logits, fake_logits)
        d_real = score(real_logits, self.model.mode)
        d_fake = score(fake_logits, self.model.mode)
        ones, zeros = np.ones(d_real.shape[0]), np.zeros(d_fake.shape[0])
        return hard_label_loss(d_real, ones) + hard_label_loss(d_fake, zeros), d_real, d_fake

    def discriminator_objective(
        self, batch: Batch, fake: Tensor, params: ParameterSet
    ) -> Tuple[Tensor, Tensor, Tensor]:
        real_logits = self.model.logits(batch.real, batch.source, params)
        fake_logits = self.model.logits(fake, batch.source, params)
        l_hard, d_real, d_fake = self.hard_label_objective(real_logits, fake_logits)
        if self.dcfg.alpha == 0:
            return l_hard * self.dcfg.beta, d_real, d_fake

        temperature = self.dcfg.temperature
        teacher_real = self.teacher.logits(batch.real, batch.source)
        teacher_fake = self.teacher.logits(fake, batch.source)
        l_soft = (
            soft_label_loss(real_logits, teacher_real, temperature)
            + soft_label_loss(fake_logits, teacher_fake, temperature)
        ) * 0.5
        return distill_loss(l_soft, l_hard, self.dcfg), d_real, d_fake

    def generator_objective(self, batch: Batch, inputs: Tensor, fake: Tensor) -> Tensor:
        loss = super().generator_objective(batch, inputs, fake)
        if self.dcfg.gamma == 0:
            return loss
        imitation = mean_absolute_error(fake, self.teacher.generate(inputs))
        return loss + imitation * self.dcfg.gamma


def train_student(
    pair: TeacherStudentPair,
    data: Sequence[ImagePair],
    cfg: TrainingConfig,
    dcfg: DistillConfig,
    observer: Optional[Observer] = None,
) -> Tuple[GanModel, TrainingHistory]:
    logger.info(
        "Distilling %d -> %d parameters (T=%s, alpha=%s, beta=%s, gamma=%s)",
        pair.teacher.parameter_count(),
        pair.student.parameter_count(),
        dcfg.temperature,
        dcfg.alpha,
        dcfg.beta,
        dcfg.gamma,
    )
    return DistillationTrainer(pair, data, cfg, dcfg, observer).run()


__all__ = [
    "DistillConfig",
    "TeacherStudentPair",
    "DistillationTrainer",
    "train_student",
]
