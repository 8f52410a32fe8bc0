from collections.abc import Mapping
from contextvars import ContextVar, Token
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from kgan.errors import GraphError, NumericError, ShapeError
from .operations import OPERATIONS

if TYPE_CHECKING:
    from .tensor import Tensor

LEAF = "leaf"
CONSTANT = "constant"

_ACTIVE_GRAPH: ContextVar[Optional["Graph"]] = ContextVar("kgan_active_graph", default=None)


@dataclass
class Node:
    kind: str
    inputs: Tuple[int, ...]
    output: int
    value: np.ndarray
    params: Dict[str, Any] = field(default_factory=dict)
    saved: Any = None


class Graph:
    """
    Records every operation applied to tracked tensors while the graph is active.

    A graph is a context manager; entering it makes it the active graph of the
    current context, so graphs of distinct threads (or tasks) never mix.
    Node ids are positions in `nodes`, which keeps them in topological order.
    """

    def __init__(self):
        self.nodes: List[Node] = []
        self._tokens: List[Token] = []

    def __enter__(self) -> "Graph":
        self._tokens.append(_ACTIVE_GRAPH.set(self))
        return self

    def __exit__(self, *exc_info: Any) -> None:
        _ACTIVE_GRAPH.reset(self._tokens.pop())

    def __len__(self) -> int:
        return len(self.nodes)

    def add_leaf(self, value: np.ndarray) -> int:
        return self._append(LEAF, (), value)

    def add_constant(self, value: np.ndarray) -> int:
        return self._append(CONSTANT, (), value)

    def record(self, kind: str, inputs: Tuple[int, ...], value: np.ndarray, params: Dict[str, Any], saved: Any) -> int:
        for input_id in inputs:
            if input_id >= len(self.nodes):
                raise GraphError(reason=f"input node {input_id} is not recorded before its consumer")
        return self._append(kind, inputs, value, params, saved)

    def _append(self, kind: str, inputs: Tuple[int, ...], value: np.ndarray, params=None, saved=None) -> int:
        node_id = len(self.nodes)
        self.nodes.append(Node(kind, inputs, node_id, value, params or {}, saved))
        return node_id

    def leaves(self) -> List[int]:
        return [node.output for node in self.nodes if node.kind == LEAF]

    def value(self, node_id: int) -> np.ndarray:
        return self.nodes[node_id].value

    def replay(self) -> Dict[int, np.ndarray]:
        """Recomputes every node from the recorded leaves and constants."""
        values: Dict[int, np.ndarray] = {}
        for node in self.nodes:
            if node.kind in (LEAF, CONSTANT):
                values[node.output] = node.value
                continue
            inputs = tuple(values[input_id] for input_id in node.inputs)
            values[node.output], _ = OPERATIONS[node.kind].forward(inputs, node.params)
        return values


def active_graph() -> Optional[Graph]:
    return _ACTIVE_GRAPH.get()


class GradientMap(Mapping):
    """Gradients keyed by node id; tracked tensors may be used as keys too."""

    def __init__(self, entries: Dict[int, "Tensor"]):
        self.entries = entries

    def _key(self, key: Union[int, "Tensor"]) -> int:
        if isinstance(key, int):
            return key
        if key.node_id is None:
            raise GraphError(reason="untracked tensors have no gradient")
        return key.node_id

    def __getitem__(self, key: Union[int, "Tensor"]) -> "Tensor":
        return self.entries[self._key(key)]

    def __contains__(self, key: object) -> bool:
        try:
            return self._key(key) in self.entries  # type: ignore
        except (GraphError, AttributeError):
            return False

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def backward(graph: Graph, loss: "Tensor") -> GradientMap:
    from .tensor import Tensor

    if loss.node_id is None or loss.graph is not graph:
        raise GraphError(reason="loss is not a node of the passed graph")
    if loss.data.ndim != 0:
        raise ShapeError(reason=f"backward requires a scalar loss, got shape {list(loss.shape)}")

    grads: Dict[int, np.ndarray] = {loss.node_id: np.ones(())}
    for node in reversed(graph.nodes[: loss.node_id + 1]):
        if node.kind in (LEAF, CONSTANT) or node.output not in grads:
            continue
        grad = grads[node.output]
        inputs = tuple(graph.nodes[input_id].value for input_id in node.inputs)
        input_grads = OPERATIONS[node.kind].backward(grad, inputs, node.value, node.saved, node.params)

        for input_id, input_grad in zip(node.inputs, input_grads):
            if input_grad is None or graph.nodes[input_id].kind == CONSTANT:
                continue
            input_grad = np.asarray(input_grad, dtype=np.float64)
            if input_grad.shape != graph.nodes[input_id].value.shape:
                raise ShapeError(
                    reason=f"`{node.kind}` backward produced gradient {input_grad.shape} "
                    f"for value {graph.nodes[input_id].value.shape}"
                )
            if not np.all(np.isfinite(input_grad)):
                raise NumericError(operation=f"{node.kind} backward")
            # fan-out accumulation in reverse graph order
            grads[input_id] = grads[input_id] + input_grad if input_id in grads else input_grad

    return GradientMap(
        {
            leaf_id: Tensor(grads.get(leaf_id, np.zeros_like(graph.nodes[leaf_id].value)))
            for leaf_id in graph.leaves()
        }
    )


__all__ = [
    "Graph",
    "Node",
    "GradientMap",
    "active_graph",
    "backward",
]
