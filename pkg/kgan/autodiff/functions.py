from typing import Optional, Sequence, Union

import numpy as np

from kgan.errors import ShapeError, DomainError
from .tensor import Operand, Tensor, apply, apply_binary

LOG_EPSILON = 1e-7

UNARY_OPERATIONS = {"neg", "log", "exp", "relu", "sigmoid", "tanh", "abs"}
BINARY_OPERATIONS = {"add", "sub", "mul"}
REDUCTIONS = {"sum", "mean"}


def elementwise(op: str, a: Tensor, b: Optional[Union[Operand, float]] = None, **params: float) -> Tensor:
    """
    Applies one elementwise operation.

    Binary operations (add, sub, mul) take a tensor of equal shape or a scalar
    as `b`; clamp takes its bounds as `b=(low, high)` or `low=`/`high=`;
    leaky_relu takes `slope=`.
    """
    if op in BINARY_OPERATIONS:
        if b is None:
            raise ShapeError(reason=f"`{op}` needs a second operand")
        return apply_binary(op, a, b)

    if op in UNARY_OPERATIONS:
        if b is not None:
            raise ShapeError(reason=f"`{op}` takes a single operand")
        return apply(op, a)

    if op == "clamp":
        low, high = b if b is not None else (params["low"], params["high"])  # type: ignore
        return clamp(a, low, high)

    if op == "leaky_relu":
        return leaky_relu(a, params.get("slope", 0.2))

    raise KeyError(f"Unsupported elementwise operation {op}")


def clamp(a: Tensor, low: float, high: float) -> Tensor:
    if low > high:
        raise DomainError(reason=f"clamp bounds are reversed: {low} > {high}")
    return apply("clamp", a, low=float(low), high=float(high))


def leaky_relu(a: Tensor, slope: float = 0.2) -> Tensor:
    return apply("leaky_relu", a, slope=float(slope))


def clamped_log(a: Tensor, epsilon: float = LOG_EPSILON) -> Tensor:
    """log(clamp(v, epsilon, 1)), the guarded logarithm used by every loss."""
    return apply("log", clamp(a, epsilon, 1.0))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise ShapeError(reason=f"matmul needs rank-2 operands, got {list(a.shape)} and {list(b.shape)}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(reason=f"inner dimensions differ: {list(a.shape)} x {list(b.shape)}")
    return apply("matmul", a, b)


def reduce(op: str, a: Tensor) -> Tensor:
    if op not in REDUCTIONS:
        raise KeyError(f"Unsupported reduction {op}")
    return apply(op, a)


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    target = tuple(int(dimension) for dimension in shape)
    if int(np.prod(target)) != a.size or any(dimension < 1 for dimension in target):
        raise ShapeError(reason=f"cannot reshape {list(a.shape)} into {list(target)}")
    return apply("reshape", a, shape=target)


def flatten(a: Tensor) -> Tensor:
    return reshape(a, (a.shape[0], a.size // a.shape[0]))


def concat(tensors: Sequence[Tensor], axis: int = 1) -> Tensor:
    first = tensors[0].shape
    for item in tensors[1:]:
        if len(item.shape) != len(first) or any(
            size != other for dim, (size, other) in enumerate(zip(item.shape, first)) if dim != axis
        ):
            raise ShapeError(reason=f"cannot concatenate {list(item.shape)} with {list(first)} along axis {axis}")
    return apply("concat", *tensors, axis=axis)


def bias_add(x: Tensor, bias: Tensor) -> Tensor:
    if x.data.ndim < 2 or bias.shape != (x.shape[1],):
        raise ShapeError(reason=f"bias {list(bias.shape)} does not match channels of {list(x.shape)}")
    return apply("bias_add", x, bias)


def softmax(logits: Tensor, temperature: float = 1.0) -> Tensor:
    """Softmax over the last axis of `logits / temperature`."""
    if temperature <= 0:
        raise DomainError(reason=f"temperature must be positive, got {temperature}")
    return apply("softmax", logits, temperature=float(temperature))


def scale_grad(a: Tensor, factor: float) -> Tensor:
    """Identity in the forward pass, multiplies the incoming gradient by `factor`."""
    return apply("scale_grad", a, factor=float(factor))


def conv2d(x: Tensor, weights: Tensor, bias: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    if x.data.ndim != 4 or weights.data.ndim != 4:
        raise ShapeError(reason="conv2d needs [N,C,H,W] input and [F,C,kH,kW] weights")
    if weights.shape[1] != x.shape[1] or bias.shape != (weights.shape[0],):
        raise ShapeError(
            reason=f"weights {list(weights.shape)} and bias {list(bias.shape)} do not fit input {list(x.shape)}"
        )
    _check_window(stride, padding)
    height, width = x.shape[2] + 2 * padding, x.shape[3] + 2 * padding
    if height < weights.shape[2] or width < weights.shape[3]:
        raise ShapeError(reason=f"kernel {list(weights.shape[2:])} is larger than padded input [{height}, {width}]")
    return apply("conv2d", x, weights, bias, stride=stride, padding=padding)


def conv_transpose2d(x: Tensor, weights: Tensor, bias: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    if x.data.ndim != 4 or weights.data.ndim != 4:
        raise ShapeError(reason="conv_transpose2d needs [N,C,H,W] input and [C,F,kH,kW] weights")
    if weights.shape[0] != x.shape[1] or bias.shape != (weights.shape[1],):
        raise ShapeError(
            reason=f"weights {list(weights.shape)} and bias {list(bias.shape)} do not fit input {list(x.shape)}"
        )
    _check_window(stride, padding)
    for size, kernel in zip(x.shape[2:], weights.shape[2:]):
        if (size - 1) * stride - 2 * padding + kernel < 1:
            raise ShapeError(reason="transposed convolution output size is not positive")
    return apply("conv_transpose2d", x, weights, bias, stride=stride, padding=padding)


def _check_window(stride: int, padding: int) -> None:
    if stride < 1 or padding < 0:
        raise ShapeError(reason=f"stride must be >= 1 and padding >= 0, got {stride} and {padding}")


__all__ = [
    "LOG_EPSILON",
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
