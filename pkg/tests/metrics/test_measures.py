import logging
import math

import numpy as np
import pytest

from kgan.data import ImageGray
from kgan.errors import MetricError
from kgan.metrics import pearson, scd, spatial_frequency, ssim
from kgan.metrics.measures import C1, C2


def _brute_force_ssim(a: np.ndarray, b: np.ndarray, window: int = 8) -> float:
    values = []
    for i in range(a.shape[0] - window + 1):
        for j in range(a.shape[1] - window + 1):
            x = a[i : i + window, j : j + window]
            y = b[i : i + window, j : j + window]
            covariance = np.mean((x - x.mean()) * (y - y.mean()))
            numerator = (2 * x.mean() * y.mean() + C1) * (2 * covariance + C2)
            denominator = (x.mean() ** 2 + y.mean() ** 2 + C1) * (x.var() + y.var() + C2)
            values.append(numerator / denominator)
    return float(np.mean(values))


def _brute_force_spatial_frequency(image: np.ndarray) -> float:
    height, width = image.shape
    rows = sum((255.0 * (image[i, j] - image[i, j - 1])) ** 2 for i in range(height) for j in range(1, width))
    columns = sum((255.0 * (image[i, j] - image[i - 1, j])) ** 2 for i in range(1, height) for j in range(width))
    return math.sqrt(rows / (height * width) + columns / (height * width))


def _brute_force_correlation(x: np.ndarray, y: np.ndarray) -> float:
    xs, ys = list(x.flat), list(y.flat)
    mean_x, mean_y = sum(xs) / len(xs), sum(ys) / len(ys)
    products = sum((p - mean_x) * (q - mean_y) for p, q in zip(xs, ys))
    energy = sum((p - mean_x) ** 2 for p in xs) * sum((q - mean_y) ** 2 for q in ys)
    return 0.0 if energy == 0.0 else products / math.sqrt(energy)


def _random_images(seed: int, count: int = 3) -> list:
    return list(np.random.default_rng(seed).uniform(size=(count, 16, 16)))


@pytest.mark.parametrize("seed", range(20))
def test_metrics_match_pixel_by_pixel_computation(seed: int) -> None:
    fused, a, b = _random_images(100 + seed)

    assert abs(spatial_frequency(fused) - _brute_force_spatial_frequency(fused)) <= 1e-9
    assert abs(ssim(fused, a) - _brute_force_ssim(fused, a)) <= 1e-9
    expected_scd = _brute_force_correlation(fused - b, a) + _brute_force_correlation(fused - a, b)
    assert abs(scd(fused, a, b) - expected_scd) <= 1e-9


@pytest.mark.parametrize("offset", [-0.3, 0.25, 2.0])
def test_spatial_frequency_ignores_intensity_shift(offset: float) -> None:
    image = _random_images(7, 1)[0]

    assert abs(spatial_frequency(image + offset) - spatial_frequency(image)) <= 1e-10


@pytest.mark.parametrize("factor", [0.5, 2.0, 3.0])
def test_spatial_frequency_scales_linearly(factor: float) -> None:
    image = _random_images(8, 1)[0]

    assert spatial_frequency(factor * image) == pytest.approx(factor * spatial_frequency(image), rel=1e-12)


def test_spatial_frequency_of_constant_image() -> None:
    assert spatial_frequency(ImageGray(np.full((5, 5), 0.4))) == 0.0


def test_spatial_frequency_of_checkerboard() -> None:
    assert spatial_frequency(ImageGray([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(255.0)


def test_spatial_frequency_of_stripes() -> None:
    stripes = np.tile([0.0, 1.0], (4, 2))

    # 4 rows x 3 jumps of 255 over 16 pixels, no vertical change
    assert spatial_frequency(stripes) == pytest.approx(np.sqrt(12 * 255.0**2 / 16))


def test_fail_spatial_frequency_of_tiny_image() -> None:
    with pytest.raises(MetricError):
        spatial_frequency(np.zeros((1, 5)))


def test_ssim_of_identical_images() -> None:
    image = np.random.default_rng(0).uniform(size=(12, 12))

    assert abs(ssim(image, image) - 1.0) <= 1e-12


def test_ssim_is_symmetric() -> None:
    rng = np.random.default_rng(1)
    a, b = rng.uniform(size=(10, 9)), rng.uniform(size=(10, 9))

    assert abs(ssim(a, b) - ssim(b, a)) <= 1e-12


def test_ssim_matches_window_by_window_computation_on_rectangles() -> None:
    rng = np.random.default_rng(2)
    a, b = rng.uniform(size=(11, 9)), rng.uniform(size=(11, 9))

    assert abs(ssim(ImageGray(a), ImageGray(b)) - _brute_force_ssim(a, b)) <= 1e-9


def test_ssim_drops_for_inverted_image() -> None:
    image = np.random.default_rng(4).uniform(size=(8, 8))

    assert ssim(image, 1.0 - image) < 0.0


@pytest.mark.parametrize(
    "a, b",
    [
        [np.zeros((7, 8)), np.zeros((7, 8))],
        [np.zeros((8, 8)), np.zeros((9, 8))],
    ],
)
def test_fail_ssim(a: np.ndarray, b: np.ndarray) -> None:
    with pytest.raises(MetricError):
        ssim(a, b)


def test_pearson() -> None:
    x = np.array([1.0, 2.0, 3.0, 4.0])

    assert pearson(x, 2 * x + 1) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)


def test_scd_of_summed_sources() -> None:
    rng = np.random.default_rng(5)
    a, b = rng.uniform(size=(6, 6)), rng.uniform(size=(6, 6))

    assert abs(scd(a + b, a, b) - 2.0) <= 1e-9


def test_scd_counts_zero_variance_as_zero(caplog) -> None:
    rng = np.random.default_rng(6)
    a, b = rng.uniform(size=(4, 4)), rng.uniform(size=(4, 4))

    with caplog.at_level(logging.WARNING, logger="kgan.metrics.measures"):
        value = scd(b, a, b)

    assert value == pytest.approx(pearson(b - a, b))
    assert "Zero variance" in caplog.text


def test_fail_scd_with_mismatched_images() -> None:
    with pytest.raises(MetricError):
        scd(np.zeros((4, 4)), np.zeros((4, 4)), np.zeros((4, 5)))
