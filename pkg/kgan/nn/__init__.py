from .functional import conv2d_forward, cross_entropy, deconv2d_forward, softmax_t
from .layers import LAYER_KINDS, LayerSpec, activation, conv, deconv, dense, forward, output_shape
from .params import ParameterSet, init_params

__all__ = [
    "LAYER_KINDS",
    "LayerSpec",
    "ParameterSet",
    "activation",
    "conv",
    "deconv",
    "dense",
    "forward",
    "output_shape",
    "init_params",
    "conv2d_forward",
    "deconv2d_forward",
    "softmax_t",
    "cross_entropy",
]
