from numbers import Real
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from kgan.errors import DomainError, GraphError, NumericError, ShapeError
from .graph import Graph, active_graph
from .operations import OPERATIONS

Operand = Union["Tensor", float, int]


class Tensor:
    """
    N-dimensional float64 array with optional gradient tracking.

    `node_id` is set iff the tensor is a node of a recorded `Graph`. Tensor
    data is never mutated in place, optimizers and updates build new tensors.
    """

    __slots__ = ("data", "node_id", "graph")

    def __init__(self, data: np.ndarray, node_id: Optional[int] = None, graph: Optional[Graph] = None):
        self.data = np.asarray(data, dtype=np.float64)
        self.node_id = node_id
        self.graph = graph

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def tracked(self) -> bool:
        return self.node_id is not None

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(reason=f"item() needs a single element tensor, got shape {list(self.shape)}")
        return float(self.data.reshape(()))

    def tolist(self) -> List[float]:
        return self.data.ravel().tolist()

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def __repr__(self) -> str:
        tracked = f", node_id={self.node_id}" if self.tracked else ""
        return f"Tensor(shape={list(self.shape)}{tracked})"

    def __add__(self, other: Operand) -> "Tensor":
        return apply_binary("add", self, other)

    def __radd__(self, other: Operand) -> "Tensor":
        return apply_binary("add", self, other)

    def __sub__(self, other: Operand) -> "Tensor":
        return apply_binary("sub", self, other)

    def __rsub__(self, other: Operand) -> "Tensor":
        return apply_binary("add", apply("neg", self), other)

    def __mul__(self, other: Operand) -> "Tensor":
        return apply_binary("mul", self, other)

    def __rmul__(self, other: Operand) -> "Tensor":
        return apply_binary("mul", self, other)

    def __truediv__(self, other: Real) -> "Tensor":
        if not isinstance(other, Real):
            raise ShapeError(reason="tensors can only be divided by a scalar")
        return apply_binary("mul", self, 1.0 / float(other))

    def __neg__(self) -> "Tensor":
        return apply("neg", self)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        from .functions import matmul

        return matmul(self, other)

    def sum(self) -> "Tensor":
        return apply("sum", self)

    def mean(self) -> "Tensor":
        return apply("mean", self)

    def reshape(self, *shape: int) -> "Tensor":
        from .functions import reshape

        return reshape(self, shape)


def _check_shape(shape: Sequence[int]) -> Tuple[int, ...]:
    result = tuple(shape)
    for dimension in result:
        if isinstance(dimension, bool) or not isinstance(dimension, (int, np.integer)) or dimension < 1:
            raise ShapeError(reason=f"dimension sizes must be positive integers, got {list(result)}")
    return tuple(int(dimension) for dimension in result)


def tensor_new(shape: Sequence[int], values: Any, track: bool = False) -> Tensor:
    dims = _check_shape(shape)
    flat = np.array(values, dtype=np.float64).ravel()
    expected = int(np.prod(dims)) if dims else 1
    if flat.size != expected:
        raise ShapeError(reason=f"shape {list(dims)} needs {expected} values, got {flat.size}")
    if not np.all(np.isfinite(flat)):
        raise DomainError(reason="tensor values must be finite")

    data = flat.reshape(dims)
    if not track:
        return Tensor(data)

    graph = active_graph()
    if graph is None:
        raise GraphError(reason="tracked tensors need an active graph")
    return Tensor(data, graph.add_leaf(data), graph)


def as_tensor(values: Any, track: bool = False) -> Tensor:
    """Builds a tensor shaped like `values` (a scalar, nested sequence or array)."""
    if isinstance(values, Tensor):
        return tensor_new(values.shape, values.data, track) if track else values
    array = np.asarray(values, dtype=np.float64)
    return tensor_new(array.shape, array, track)


def apply(kind: str, *inputs: Tensor, **params: Any) -> Tensor:
    value, saved = OPERATIONS[kind].forward(tuple(item.data for item in inputs), params)
    value = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(value)):
        raise NumericError(operation=kind)

    if not any(item.tracked for item in inputs):
        return Tensor(value)

    graph = active_graph()
    if graph is None:
        raise GraphError(reason=f"`{kind}` received tracked tensors outside of an active graph")

    input_ids = []
    for item in inputs:
        if not item.tracked:
            input_ids.append(graph.add_constant(item.data))
        elif item.graph is not graph:
            raise GraphError(reason=f"`{kind}` mixes tensors from different graphs")
        else:
            input_ids.append(item.node_id)

    return Tensor(value, graph.record(kind, tuple(input_ids), value, params, saved), graph)


def apply_binary(kind: str, a: Tensor, b: Operand) -> Tensor:
    if isinstance(b, Tensor):
        if b.shape != a.shape and b.data.ndim != 0:
            raise ShapeError(reason=f"`{kind}` needs equal shapes or a scalar operand, got {list(a.shape)} and "
                             f"{list(b.shape)}")
        return apply(kind, a, b)
    if isinstance(b, bool) or not isinstance(b, Real):
        raise ShapeError(reason=f"`{kind}` operand must be a tensor or a real scalar")
    if not np.isfinite(b):
        raise DomainError(reason=f"`{kind}` scalar operand must be finite")
    return apply(kind, a, scalar=float(b))


__all__ = [
    "Tensor",
    "tensor_new",
    "as_tensor",
    "apply",
    "apply_binary",
]
