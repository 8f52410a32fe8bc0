from .losses import distill_loss, hard_label_loss, soft_label_loss
from .training import DistillConfig, DistillationTrainer, TeacherStudentPair, train_student

__all__ = [
    "DistillConfig",
    "DistillationTrainer",
    "TeacherStudentPair",
    "distill_loss",
    "hard_label_loss",
    "soft_label_loss",
    "train_student",
]
