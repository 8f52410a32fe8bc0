from .functions import (
    LOG_EPSILON,
    bias_add,
    clamp,
    clamped_log,
    concat,
    conv2d,
    conv_transpose2d,
    elementwise,
    flatten,
    leaky_relu,
    matmul,
    reduce,
    reshape,
    scale_grad,
    softmax,
)
from .gradcheck import grad_check
from .graph import GradientMap, Graph, Node, active_graph, backward
from .operations import OPERATIONS, Operation
from .tensor import Tensor, as_tensor, tensor_new

__all__ = [
    "LOG_EPSILON",
    "OPERATIONS",
    "Operation",
    "Tensor",
    "Graph",
    "Node",
    "GradientMap",
    "active_graph",
    "backward",
    "grad_check",
    "tensor_new",
    "as_tensor",
    "elementwise",
    "clamp",
    "clamped_log",
    "leaky_relu",
    "matmul",
    "reduce",
    "reshape",
    "flatten",
    "concat",
    "bias_add",
    "softmax",
    "scale_grad",
    "conv2d",
    "conv_transpose2d",
]
