import numpy as np
import pytest

from kgan.autodiff import Graph, Tensor, as_tensor, elementwise, tensor_new
from kgan.errors import DomainError, GraphError, NumericError, ShapeError


def test_can_create_tensor() -> None:
    tensor = tensor_new([2, 3], [1, 2, 3, 4, 5, 6])

    assert tensor.shape == (2, 3)
    assert tensor.size == 6
    assert not tensor.tracked
    assert tensor.data.dtype == np.float64
    assert tensor.tolist() == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]


def test_can_create_scalar_tensor() -> None:
    tensor = tensor_new([], 2.5)

    assert tensor.shape == ()
    assert tensor.item() == 2.5


@pytest.mark.parametrize(
    "shape, values",
    [
        [[2, 3], [1, 2, 3]],
        [[2], [1, 2, 3]],
        [[0, 3], []],
        [[-1], [1]],
    ],
)
def test_fail_create_tensor_with_bad_shape(shape: list, values: list) -> None:
    with pytest.raises(ShapeError):
        tensor_new(shape, values)


@pytest.mark.parametrize("value", [float("nan"), float("inf"), -float("inf")])
def test_fail_create_tensor_with_non_finite_values(value: float) -> None:
    with pytest.raises(DomainError):
        tensor_new([2], [1.0, value])


def test_fail_create_tracked_tensor_without_graph() -> None:
    with pytest.raises(GraphError):
        tensor_new([1], [1.0], track=True)


def test_tracked_tensor_is_graph_leaf() -> None:
    with Graph() as graph:
        tensor = tensor_new([2], [1.0, 2.0], track=True)

    assert tensor.tracked
    assert tensor.graph is graph
    assert graph.leaves() == [tensor.node_id]


def test_as_tensor_keeps_nested_shape() -> None:
    tensor = as_tensor([[1, 2], [3, 4]])

    assert tensor.shape == (2, 2)
    assert tensor.numpy()[1, 0] == 3.0


def test_arithmetic_operators() -> None:
    a = tensor_new([3], [1.0, 2.0, 3.0])
    b = tensor_new([3], [4.0, 5.0, 6.0])

    assert (a + b).tolist() == [5.0, 7.0, 9.0]
    assert (b - a).tolist() == [3.0, 3.0, 3.0]
    assert (a * b).tolist() == [4.0, 10.0, 18.0]
    assert (-a).tolist() == [-1.0, -2.0, -3.0]
    assert (2.0 * a).tolist() == [2.0, 4.0, 6.0]
    assert (1.0 - a).tolist() == [0.0, -1.0, -2.0]
    assert (a / 2).tolist() == [0.5, 1.0, 1.5]
    assert (a + 1).tolist() == [2.0, 3.0, 4.0]


def test_rank_zero_tensor_broadcasts() -> None:
    a = tensor_new([2, 2], [1.0, 2.0, 3.0, 4.0])
    scale = tensor_new([], 3.0)

    assert (a * scale).tolist() == [3.0, 6.0, 9.0, 12.0]


def test_fail_binary_operation_on_mismatched_shapes() -> None:
    with pytest.raises(ShapeError):
        tensor_new([2], [1, 2]) + tensor_new([3], [1, 2, 3])


def test_fail_divide_by_tensor() -> None:
    with pytest.raises(ShapeError):
        tensor_new([2], [1, 2]) / tensor_new([2], [1, 2])


@pytest.mark.parametrize("value", [0.0, -1.0])
def test_fail_log_outside_of_domain(value: float) -> None:
    with pytest.raises(DomainError):
        elementwise("log", tensor_new([2], [1.0, value]))


def test_fail_on_overflow() -> None:
    with pytest.raises(NumericError):
        elementwise("exp", tensor_new([1], [1000.0]))


def test_fail_unknown_elementwise_operation() -> None:
    with pytest.raises(KeyError):
        elementwise("cube", tensor_new([1], [1.0]))


def test_fail_item_on_vector() -> None:
    with pytest.raises(ShapeError):
        tensor_new([2], [1.0, 2.0]).item()


def test_detach_drops_tracking() -> None:
    with Graph():
        tensor = tensor_new([2], [1.0, 2.0], track=True)
        detached = tensor.detach()

    assert not detached.tracked
    assert detached.tolist() == [1.0, 2.0]


def test_fail_mix_graphs() -> None:
    with Graph():
        first = tensor_new([1], [1.0], track=True)
    with Graph():
        second = tensor_new([1], [1.0], track=True)
        with pytest.raises(GraphError):
            first + second


def test_untracked_operations_record_nothing() -> None:
    with Graph() as graph:
        result = Tensor(np.ones(3)) * 2.0

    assert not result.tracked
    assert len(graph) == 0
