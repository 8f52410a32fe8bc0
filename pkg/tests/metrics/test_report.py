import numpy as np
import pytest

from kgan.data import generate_phantom_pair
from kgan.errors import MetricError
from kgan.gan import build_student
from kgan.metrics import MetricsReport, comparison_csv, evaluate, format_value, round_significant
from kgan.metrics.measures import scd, spatial_frequency, ssim


def _test_pairs(count: int = 3) -> list:
    return [generate_phantom_pair(seed, 16, seed) for seed in range(count)]


@pytest.mark.parametrize(
    "value, expected",
    [
        [12.3456789, 12.3457],
        [0.000123456789, 0.000123457],
        [-2.5, -2.5],
        [1234567.0, 1234570.0],
    ],
)
def test_round_significant(value: float, expected: float) -> None:
    assert round_significant(value) == expected


def test_report_csv() -> None:
    report = MetricsReport()
    report.add(3, 12.3456789, 0.5, -0.25)

    assert report.to_csv() == "id,sf,ssim,scd\n3,12.3457,0.5,-0.25\nmean,12.3457,0.5,-0.25\nstd,0,0,0\n"


def test_report_aggregates() -> None:
    report = MetricsReport()
    report.add(0, 1.0, 0.2, 0.0)
    report.add(1, 3.0, 0.4, 1.0)

    assert report.mean == pytest.approx((2.0, 0.3, 0.5))
    assert report.std == pytest.approx((1.0, 0.1, 0.5))
    assert report.summary() == "SF=2.000000 SSIM=0.300000 SCD=0.500000"


def test_report_aggregates_recompute_from_csv_rows(tmp_path) -> None:
    report = MetricsReport()
    for index, value in enumerate([1.23456789, 2.3456789, 3.456789]):
        report.add(index, value, value / 10, -value)
    path = tmp_path / "metrics.csv"

    report.save_csv(path)
    rows = [line.split(",") for line in path.read_text().splitlines()[1:4]]

    assert report.mean[0] == pytest.approx(np.mean([float(row[1]) for row in rows]), rel=1e-12)


def test_report_csv_writes_aggregates_like_rows() -> None:
    # given
    report = MetricsReport()
    report.add(0, 1.0, 0.1, 0.3)
    report.add(1, 2.0, 0.2, 0.4)
    report.add(2, 4.0, 0.4, 0.5)

    # when
    lines = report.to_csv().splitlines()

    # then
    assert lines[-2] == "mean,2.33333,0.233333,0.4"
    assert lines[-1] == "std," + ",".join(format_value(value) for value in report.std)
    assert all(len(value.replace("-", "").replace(".", "").lstrip("0")) <= 6 for value in lines[-1].split(",")[1:])


def test_fail_aggregates_of_empty_report() -> None:
    with pytest.raises(MetricError):
        MetricsReport().mean


def test_evaluate_scores_every_test_pair() -> None:
    pairs = _test_pairs()

    report = evaluate(lambda sources: sources, pairs)

    assert [row.id for row in report.rows] == [0, 1, 2]
    first = pairs[0]
    assert report.rows[0].sf == round_significant(spatial_frequency(first.modality_a))
    assert report.rows[0].ssim == round_significant(ssim(first.modality_a, first.modality_b))
    assert report.rows[0].scd == round_significant(scd(first.modality_a, first.modality_a, first.modality_b))


def test_evaluate_model() -> None:
    report = evaluate(build_student(16, 0), _test_pairs(2))

    assert len(report.rows) == 2
    assert all(np.isfinite(row.values()).all() for row in report.rows)


def test_fail_evaluate() -> None:
    with pytest.raises(MetricError):
        evaluate(lambda sources: sources, [])
    with pytest.raises(MetricError):
        evaluate(lambda sources: sources[:, :8, :8], _test_pairs(1))


def test_comparison_csv_keeps_method_order() -> None:
    teacher, student = MetricsReport(), MetricsReport()
    teacher.add(0, 10.0, 0.5, 1.0)
    student.add(0, 8.0, 0.25, 0.75)

    text = comparison_csv({"teacher": teacher, "student": student})

    assert text == "method,sf,ssim,scd\nteacher,10,0.5,1\nstudent,8,0.25,0.75\n"
