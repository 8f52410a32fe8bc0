import math

import numpy as np
import pytest

from kgan.autodiff import Graph, Tensor, backward, tensor_new
from kgan.distill import DistillConfig, distill_loss, hard_label_loss, soft_label_loss
from kgan.errors import DomainError, ShapeError


def test_soft_label_loss_of_uniform_teacher() -> None:
    loss = soft_label_loss(Tensor(np.zeros((3, 2))), Tensor(np.zeros((3, 2))), 4.0)

    assert loss.item() == pytest.approx(math.log(2.0))


def test_soft_label_loss_is_minimal_at_teacher() -> None:
    teacher = Tensor(np.array([[2.0, -1.0], [0.5, 0.0]]))

    matching = soft_label_loss(teacher, teacher, 2.0).item()
    other = soft_label_loss(Tensor(np.zeros((2, 2))), teacher, 2.0).item()

    assert matching < other


def test_soft_label_gradient_is_scaled_by_squared_temperature() -> None:
    student = np.array([[0.3, -0.4], [1.0, 0.2]])
    teacher = Tensor(np.array([[1.0, 0.0], [-1.0, 0.5]]))
    gradients = []
    for scaled in (True, False):
        with Graph() as graph:
            logits = tensor_new(student.shape, student, track=True)
            loss = soft_label_loss(logits, teacher, 3.0, scaled=scaled)
            gradients.append(backward(graph, loss)[logits].data)

    assert np.allclose(gradients[0], 9.0 * gradients[1])


def test_teacher_logits_receive_no_gradient() -> None:
    with Graph() as graph:
        student = tensor_new([1, 2], [0.1, 0.2], track=True)
        teacher = tensor_new([1, 2], [1.0, -1.0], track=True)
        grads = backward(graph, soft_label_loss(student, teacher, 2.0))

    assert grads[teacher].tolist() == [0.0, 0.0]
    assert np.any(grads[student].data != 0.0)


def test_fail_soft_label_loss() -> None:
    with pytest.raises(DomainError):
        soft_label_loss(Tensor(np.zeros((1, 2))), Tensor(np.zeros((1, 2))), 0.0)
    with pytest.raises(ShapeError):
        soft_label_loss(Tensor(np.zeros((1, 2))), Tensor(np.zeros((2, 2))), 1.0)
    with pytest.raises(ShapeError):
        soft_label_loss(Tensor(np.zeros(2)), Tensor(np.zeros(2)), 1.0)


def test_hard_label_loss() -> None:
    assert hard_label_loss(Tensor(np.array([0.5, 0.5])), [1.0, 0.0]).item() == pytest.approx(math.log(2.0))
    assert hard_label_loss(Tensor(np.array([1.0, 0.0])), [1.0, 0.0]).item() == pytest.approx(0.0)


def test_fail_hard_label_loss() -> None:
    with pytest.raises(DomainError):
        hard_label_loss(Tensor(np.array([0.5, 0.5])), [0.5, 1.0])
    with pytest.raises(ShapeError):
        hard_label_loss(Tensor(np.array([0.5, 0.5])), [1.0])


def test_distill_loss_weights() -> None:
    assert distill_loss(2.0, 4.0, DistillConfig()) == pytest.approx(2.6)
    assert distill_loss(2.0, 4.0, DistillConfig(alpha=0.0, beta=1.0)) == 4.0


def test_distill_loss_is_linear_in_both_losses() -> None:
    rng = np.random.default_rng(0)
    for alpha, beta, factor in rng.uniform(0.0, 2.0, size=(1000, 3)):
        cfg = DistillConfig(alpha=alpha, beta=beta)
        (soft, hard), (other_soft, other_hard) = rng.uniform(0.0, 3.0, size=(2, 2))

        combined = distill_loss(soft + factor * other_soft, hard + factor * other_hard, cfg)
        separate = distill_loss(soft, hard, cfg) + factor * distill_loss(other_soft, other_hard, cfg)

        assert abs(combined - separate) <= 1e-12
        assert distill_loss(soft, hard, cfg) == pytest.approx(alpha * soft + beta * hard, abs=1e-12)


def test_distill_loss_example() -> None:
    assert distill_loss(0.4, 0.8, DistillConfig(alpha=0.5, beta=0.5)) == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("temperature", [1.0, 4.0])
def test_soft_label_gradient_vanishes_at_teacher(temperature: float) -> None:
    # given
    logits = np.random.default_rng(4).normal(size=(5, 2))

    # when
    with Graph() as graph:
        student = tensor_new(logits.shape, logits, track=True)
        loss = soft_label_loss(student, Tensor(logits.copy()), temperature)
        gradient = backward(graph, loss)[student].data

    # then
    assert np.max(np.abs(gradient)) <= 1e-12


def test_soft_label_loss_at_teacher_is_its_entropy() -> None:
    logits = np.array([[2.0, 0.0], [-0.5, 1.5]])
    probabilities = np.exp(logits / 2.0) / np.exp(logits / 2.0).sum(axis=1, keepdims=True)

    loss = soft_label_loss(Tensor(logits), Tensor(logits), 2.0).item()

    assert loss == pytest.approx(-np.mean(np.sum(probabilities * np.log(probabilities), axis=1)), abs=1e-12)


@pytest.mark.parametrize(
    "arguments",
    [
        {"temperature": 0.0},
        {"alpha": -0.1},
        {"gamma": -1.0},
        {"alpha": 0.0, "beta": 0.0},
        {"scale": 0.0},
        {"scale": 1.5},
    ],
)
def test_fail_invalid_distill_config(arguments: dict) -> None:
    with pytest.raises(DomainError):
        DistillConfig(**arguments)
