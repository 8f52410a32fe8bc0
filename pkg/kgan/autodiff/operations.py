"""
Primitive differentiable operations.

Each primitive is a pair of plain functions over numpy arrays:

    forward(inputs, params) -> (value, saved)
    backward(grad, inputs, value, saved, params) -> one gradient (or None) per input

`params` holds the non-tensor arguments (scalars, stride, padding...) and is
recorded in the graph, so a node can be replayed from its inputs alone.
"""
from typing import Any, Callable, Dict, NamedTuple, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from kgan.errors import DomainError

Arrays = Tuple[np.ndarray, ...]
Gradients = Tuple[Optional[np.ndarray], ...]


class Operation(NamedTuple):
    forward: Callable[[Arrays, Dict[str, Any]], Tuple[np.ndarray, Any]]
    backward: Callable[[np.ndarray, Arrays, np.ndarray, Any, Dict[str, Any]], Gradients]


def _unscalar(grad: np.ndarray, operand: np.ndarray) -> np.ndarray:
    if operand.shape == grad.shape:
        return grad
    # rank-0 operand broadcast over the first one
    return np.asarray(grad.sum())


def _second(inputs: Arrays, params: Dict[str, Any]) -> Any:
    return inputs[1] if len(inputs) > 1 else params["scalar"]


def _add_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return inputs[0] + _second(inputs, params), None


def _add_backward(grad, inputs, value, saved, params) -> Gradients:
    if len(inputs) == 1:
        return (grad,)
    return grad, _unscalar(grad, inputs[1])


def _sub_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return inputs[0] - _second(inputs, params), None


def _sub_backward(grad, inputs, value, saved, params) -> Gradients:
    if len(inputs) == 1:
        return (grad,)
    return grad, _unscalar(-grad, inputs[1])


def _mul_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return inputs[0] * _second(inputs, params), None


def _mul_backward(grad, inputs, value, saved, params) -> Gradients:
    if len(inputs) == 1:
        return (grad * params["scalar"],)
    a, b = inputs
    return grad * b, _unscalar(grad * a, b)


def _neg_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return -inputs[0], None


def _neg_backward(grad, inputs, value, saved, params) -> Gradients:
    return (-grad,)


def _log_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    a = inputs[0]
    if np.any(a <= 0.0):
        raise DomainError(reason="log requires strictly positive input")
    return np.log(a), None


def _log_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad / inputs[0],)


def _exp_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    with np.errstate(over="ignore"):
        return np.exp(inputs[0]), None


def _exp_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad * value,)


def _relu_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    a = inputs[0]
    return np.where(a > 0.0, a, 0.0), None


def _relu_backward(grad, inputs, value, saved, params) -> Gradients:
    # subgradient 0 at exactly 0
    return (np.where(inputs[0] > 0.0, grad, 0.0),)


def _leaky_relu_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    a = inputs[0]
    return np.where(a > 0.0, a, params["slope"] * a), None


def _leaky_relu_backward(grad, inputs, value, saved, params) -> Gradients:
    return (np.where(inputs[0] > 0.0, grad, params["slope"] * grad),)


def _sigmoid_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    a = inputs[0]
    decay = np.exp(-np.abs(a))
    return np.where(a >= 0.0, 1.0 / (1.0 + decay), decay / (1.0 + decay)), None


def _sigmoid_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad * value * (1.0 - value),)


def _tanh_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return np.tanh(inputs[0]), None


def _tanh_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad * (1.0 - value * value),)


def _clamp_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return np.clip(inputs[0], params["low"], params["high"]), None


def _clamp_backward(grad, inputs, value, saved, params) -> Gradients:
    a = inputs[0]
    inside = (a >= params["low"]) & (a <= params["high"])
    return (np.where(inside, grad, 0.0),)


def _abs_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return np.abs(inputs[0]), None


def _abs_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad * np.sign(inputs[0]),)


def _matmul_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return inputs[0] @ inputs[1], None


def _matmul_backward(grad, inputs, value, saved, params) -> Gradients:
    a, b = inputs
    return grad @ b.T, a.T @ grad


def _sum_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return np.asarray(np.sum(inputs[0])), None


def _sum_backward(grad, inputs, value, saved, params) -> Gradients:
    return (np.full(inputs[0].shape, float(grad)),)


def _mean_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return np.asarray(np.sum(inputs[0]) / inputs[0].size), None


def _mean_backward(grad, inputs, value, saved, params) -> Gradients:
    return (np.full(inputs[0].shape, float(grad) / inputs[0].size),)


def _reshape_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return inputs[0].reshape(params["shape"]), None


def _reshape_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad.reshape(inputs[0].shape),)


def _concat_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return np.concatenate(inputs, axis=params["axis"]), None


def _concat_backward(grad, inputs, value, saved, params) -> Gradients:
    boundaries = np.cumsum([item.shape[params["axis"]] for item in inputs])[:-1]
    return tuple(np.ascontiguousarray(part) for part in np.split(grad, boundaries, axis=params["axis"]))


def _channel_view(bias: np.ndarray, rank: int) -> np.ndarray:
    return bias.reshape((1, -1) + (1,) * (rank - 2))


def _bias_add_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    x, bias = inputs
    return x + _channel_view(bias, x.ndim), None


def _bias_add_backward(grad, inputs, value, saved, params) -> Gradients:
    axes = tuple(axis for axis in range(grad.ndim) if axis != 1)
    return grad, grad.sum(axis=axes)


def _softmax_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    scaled = inputs[0] / params["temperature"]
    shifted = scaled - scaled.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True), None


def _softmax_backward(grad, inputs, value, saved, params) -> Gradients:
    inner = (grad * value).sum(axis=-1, keepdims=True)
    return (value * (grad - inner) / params["temperature"],)


def _scale_grad_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    return inputs[0], None


def _scale_grad_backward(grad, inputs, value, saved, params) -> Gradients:
    return (grad * params["factor"],)


def im2col(x: np.ndarray, kernel: Tuple[int, int], stride: int, padding: int) -> Tuple[np.ndarray, int, int]:
    """Unfolds [N,C,H,W] into rows of receptive fields ordered (C, kH, kW)."""
    kernel_h, kernel_w = kernel
    batch, channels = x.shape[:2]
    padded = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    windows = sliding_window_view(padded, (kernel_h, kernel_w), axis=(2, 3))[:, :, ::stride, ::stride]
    out_h, out_w = windows.shape[2], windows.shape[3]
    cols = windows.transpose(0, 2, 3, 1, 4, 5).reshape(batch * out_h * out_w, channels * kernel_h * kernel_w)
    return np.ascontiguousarray(cols), out_h, out_w


def col2im(
    cols: np.ndarray, shape: Tuple[int, int, int, int], kernel: Tuple[int, int], stride: int, padding: int
) -> np.ndarray:
    """Adjoint of `im2col`: scatters-adds receptive field rows back into a [N,C,H,W] array."""
    batch, channels, height, width = shape
    kernel_h, kernel_w = kernel
    padded_h, padded_w = height + 2 * padding, width + 2 * padding
    out_h = (padded_h - kernel_h) // stride + 1
    out_w = (padded_w - kernel_w) // stride + 1
    blocks = cols.reshape(batch, out_h, out_w, channels, kernel_h, kernel_w).transpose(0, 3, 4, 5, 1, 2)
    padded = np.zeros((batch, channels, padded_h, padded_w))
    for i in range(kernel_h):
        for j in range(kernel_w):
            padded[:, :, i : i + stride * out_h : stride, j : j + stride * out_w : stride] += blocks[:, :, i, j]
    return np.ascontiguousarray(padded[:, :, padding : padding + height, padding : padding + width])


def _conv2d_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    x, weights, bias = inputs
    filters = weights.shape[0]
    cols, out_h, out_w = im2col(x, weights.shape[2:], params["stride"], params["padding"])
    out = cols @ weights.reshape(filters, -1).T + bias
    out = out.reshape(x.shape[0], out_h, out_w, filters).transpose(0, 3, 1, 2)
    return np.ascontiguousarray(out), cols


def _conv2d_backward(grad, inputs, value, saved, params) -> Gradients:
    x, weights, bias = inputs
    filters = weights.shape[0]
    grad_rows = grad.transpose(0, 2, 3, 1).reshape(-1, filters)
    grad_weights = (grad_rows.T @ saved).reshape(weights.shape)
    grad_bias = grad_rows.sum(axis=0)
    grad_cols = grad_rows @ weights.reshape(filters, -1)
    grad_x = col2im(grad_cols, x.shape, weights.shape[2:], params["stride"], params["padding"])
    return grad_x, grad_weights, grad_bias


def _conv_transpose2d_forward(inputs: Arrays, params: Dict[str, Any]) -> Tuple[np.ndarray, Any]:
    x, weights, bias = inputs
    batch, channels, height, width = x.shape
    filters, kernel_h, kernel_w = weights.shape[1:]
    stride, padding = params["stride"], params["padding"]
    out_h = (height - 1) * stride - 2 * padding + kernel_h
    out_w = (width - 1) * stride - 2 * padding + kernel_w
    rows = x.transpose(0, 2, 3, 1).reshape(-1, channels)
    cols = rows @ weights.reshape(channels, -1)
    out = col2im(cols, (batch, filters, out_h, out_w), (kernel_h, kernel_w), stride, padding)
    return out + _channel_view(bias, 4), rows


def _conv_transpose2d_backward(grad, inputs, value, saved, params) -> Gradients:
    x, weights, bias = inputs
    batch, channels, height, width = x.shape
    grad_cols, _, _ = im2col(grad, weights.shape[2:], params["stride"], params["padding"])
    weight_matrix = weights.reshape(channels, -1)
    grad_x = (grad_cols @ weight_matrix.T).reshape(batch, height, width, channels).transpose(0, 3, 1, 2)
    grad_weights = (saved.T @ grad_cols).reshape(weights.shape)
    grad_bias = grad.sum(axis=(0, 2, 3))
    return np.ascontiguousarray(grad_x), grad_weights, grad_bias


class _OperationRegistry:
    def __init__(self):
        self._operations: Dict[str, Operation] = {
            "add": Operation(_add_forward, _add_backward),
            "sub": Operation(_sub_forward, _sub_backward),
            "mul": Operation(_mul_forward, _mul_backward),
            "neg": Operation(_neg_forward, _neg_backward),
            "log": Operation(_log_forward, _log_backward),
            "exp": Operation(_exp_forward, _exp_backward),
            "relu": Operation(_relu_forward, _relu_backward),
            "leaky_relu": Operation(_leaky_relu_forward, _leaky_relu_backward),
            "sigmoid": Operation(_sigmoid_forward, _sigmoid_backward),
            "tanh": Operation(_tanh_forward, _tanh_backward),
            "clamp": Operation(_clamp_forward, _clamp_backward),
            "abs": Operation(_abs_forward, _abs_backward),
            "matmul": Operation(_matmul_forward, _matmul_backward),
            "sum": Operation(_sum_forward, _sum_backward),
            "mean": Operation(_mean_forward, _mean_backward),
            "reshape": Operation(_reshape_forward, _reshape_backward),
            "concat": Operation(_concat_forward, _concat_backward),
            "bias_add": Operation(_bias_add_forward, _bias_add_backward),
            "softmax": Operation(_softmax_forward, _softmax_backward),
            "scale_grad": Operation(_scale_grad_forward, _scale_grad_backward),
            "conv2d": Operation(_conv2d_forward, _conv2d_backward),
            "conv_transpose2d": Operation(_conv_transpose2d_forward, _conv_transpose2d_backward),
        }

    def __getitem__(self, kind: str) -> Operation:
        if kind in self._operations:
            return self._operations[kind]
        raise KeyError(f"Unsupported operation {kind}")

    def __setitem__(self, kind: str, value: Operation) -> None:
        self._operations[kind] = value

    def __contains__(self, kind: str) -> bool:
        return kind in self._operations

    def kinds(self) -> Tuple[str, ...]:
        return tuple(self._operations)


OPERATIONS = _OperationRegistry()


__all__ = [
    "OPERATIONS",
    "Operation",
    "im2col",
    "col2im",
]
