import logging

import numpy as np
import pytest

from kgan.autodiff import Tensor
from kgan.diagnostics import GradcheckCase, GradcheckResult, failed_checks, gradcheck_cases, run_gradcheck
from kgan.errors import DomainError
from kgan.gan import build_teacher


def test_gradcheck_cases_cover_operations_losses_and_networks() -> None:
    cases = gradcheck_cases()
    names = [case.name for case in cases]

    assert len(cases) == 24 + 9 + 20
    assert len(set(names)) == len(names)
    assert {"conv2d", "conv_transpose2d.weight", "soft_label_loss.t2", "teacher_generator.input"} <= set(names)
    assert all(case.components == 24 and case.step == 1e-7 for case in cases if case.name.startswith("teacher_"))


@pytest.mark.parametrize("conditioning", ["image", "noise"])
def test_network_cases_cover_every_parameter_tensor(conditioning: str) -> None:
    # given
    teacher = build_teacher(8, 1, conditioning=conditioning)

    # when
    names = {case.name for case in gradcheck_cases(1, 8, conditioning)}

    # then
    assert {f"teacher_generator.{name}" for name in teacher.generator_params} <= names
    assert {f"teacher_discriminator.{name}" for name in teacher.discriminator_params} <= names
    assert {"teacher_generator.input", "teacher_discriminator.input"} <= names


@pytest.mark.parametrize("name", ["teacher_generator.g_dense2.bias", "teacher_discriminator.d_conv3.weight"])
def test_noise_network_case_passes(name: str) -> None:
    cases = [case for case in gradcheck_cases(2, 8, "noise") if case.name == name]

    assert [result.passed for result in run_gradcheck(cases)] == [True]


def test_gradcheck_cases_are_seeded() -> None:
    first, second, other = gradcheck_cases(5)[0], gradcheck_cases(5)[0], gradcheck_cases(6)[0]

    assert np.array_equal(first.point.data, second.point.data)
    assert not np.array_equal(first.point.data, other.point.data)


@pytest.mark.parametrize("name", ["mul", "softmax", "conv2d", "cross_entropy", "soft_label_loss"])
def test_run_gradcheck_passes(name: str) -> None:
    cases = [case for case in gradcheck_cases() if case.name == name]

    results = run_gradcheck(cases)

    assert [result.name for result in results] == [name]
    assert results[0].passed
    assert failed_checks(results) == {}


def test_run_gradcheck_counts_errors_as_failures(caplog) -> None:
    def broken(x: Tensor) -> Tensor:
        raise DomainError(reason="no gradient here")

    with caplog.at_level(logging.WARNING):
        results = run_gradcheck([GradcheckCase("broken", broken, Tensor(np.ones(3)))])

    assert failed_checks(results) == {"broken": float("inf")}
    assert "Gradient check of broken failed" in caplog.text


@pytest.mark.parametrize(
    "error, passed",
    [
        (0.0, True),
        (1e-4, True),
        (2e-4, False),
        (float("nan"), False),
        (float("inf"), False),
    ],
)
def test_gradcheck_result_passed(error: float, passed: bool) -> None:
    assert GradcheckResult("case", error).passed is passed


def test_failed_checks_honours_tolerance() -> None:
    results = [GradcheckResult("loose", 1e-3, tolerance=1e-2), GradcheckResult("tight", 1e-3)]

    assert failed_checks(results) == {"tight": 1e-3}
