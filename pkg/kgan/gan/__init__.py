from .checkpoint import SIDECAR_NAME, load_checkpoint, save_checkpoint
from .losses import discriminator_loss, generator_loss, mean_absolute_error, wgan_generator_loss, wgan_losses
from .models import (
    SUPPORTED_SIZES,
    GanModel,
    build_model,
    build_student,
    build_teacher,
    discriminator_specs,
    generator_specs,
    real_margin,
    score,
    synthesize,
)
from .optim import OptimizerConfig, OptimizerState, optimizer_step
from .training import (
    AdversarialTrainer,
    Batch,
    EpochRecord,
    Observer,
    TrainingConfig,
    TrainingEvent,
    TrainingHistory,
    train_gan,
)

__all__ = [
    "SIDECAR_NAME",
    "SUPPORTED_SIZES",
    "AdversarialTrainer",
    "Batch",
    "EpochRecord",
    "GanModel",
    "Observer",
    "OptimizerConfig",
    "OptimizerState",
    "TrainingConfig",
    "TrainingEvent",
    "TrainingHistory",
    "build_model",
    "build_student",
    "build_teacher",
    "discriminator_loss",
    "discriminator_specs",
    "generator_loss",
    "generator_specs",
    "load_checkpoint",
    "mean_absolute_error",
    "optimizer_step",
    "real_margin",
    "save_checkpoint",
    "score",
    "synthesize",
    "train_gan",
    "wgan_generator_loss",
    "wgan_losses",
]
