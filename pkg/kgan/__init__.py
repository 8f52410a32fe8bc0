from .__version__ import __version__
from .autodiff import Graph, Tensor, backward, elementwise, grad_check, matmul, reduce, tensor_new
from .config import ExperimentConfig, load_config
from .data import ImageGray, ImagePair, generate_phantom_pair, make_split
from .distill import DistillConfig, TeacherStudentPair, distill_loss, hard_label_loss, soft_label_loss, train_student
from .errors import KganError
from .gan import GanModel, TrainingConfig, TrainingHistory, build_student, build_teacher, train_gan
from .metrics import MetricsReport, evaluate, scd, spatial_frequency, ssim
from .nn import LayerSpec, ParameterSet, cross_entropy, forward, init_params, softmax_t

__all__ = [
    "__version__",
    "DistillConfig",
    "ExperimentConfig",
    "GanModel",
    "Graph",
    "ImageGray",
    "ImagePair",
    "KganError",
    "LayerSpec",
    "MetricsReport",
    "ParameterSet",
    "TeacherStudentPair",
    "Tensor",
    "TrainingConfig",
    "TrainingHistory",
    "backward",
    "build_student",
    "build_teacher",
    "cross_entropy",
    "distill_loss",
    "elementwise",
    "evaluate",
    "forward",
    "generate_phantom_pair",
    "grad_check",
    "hard_label_loss",
    "init_params",
    "load_config",
    "make_split",
    "matmul",
    "reduce",
    "scd",
    "soft_label_loss",
    "softmax_t",
    "spatial_frequency",
    "ssim",
    "tensor_new",
    "train_gan",
    "train_student",
]
