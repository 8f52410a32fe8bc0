"""
Fusion quality measures over grayscale images.

* SF, spatial frequency: sqrt(RF^2 + CF^2) where RF^2 (CF^2) is the sum of
  squared horizontal (vertical) first differences divided by H * W, on the
  0..255 pixel scale.
* SSIM: mean of local structural similarity over every 8x8 window (stride 1,
  uniform weights, population moments), C1 = (0.01 L)^2, C2 = (0.03 L)^2, L = 1.
* SCD, sum of the correlations of differences:
  r(F - B, A) + r(F - A, B), with r the Pearson correlation over all pixels
  and r = 0 when either side has zero variance.
"""
import logging
from typing import Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from kgan.data import ImageGray
from kgan.errors import MetricError

logger = logging.getLogger(__name__)

PIXEL_SCALE = 255.0
SSIM_WINDOW = 8
DYNAMIC_RANGE = 1.0
C1 = (0.01 * DYNAMIC_RANGE) ** 2
C2 = (0.03 * DYNAMIC_RANGE) ** 2

Image = Union[ImageGray, np.ndarray]


def _pixels(img: Image, minimum: int, name: str = "image") -> np.ndarray:
    pixels = img.pixels if isinstance(img, ImageGray) else np.asarray(img, dtype=np.float64)
    if pixels.ndim != 2 or min(pixels.shape) < minimum:
        raise MetricError(reason=f"{name} must be at least {minimum}x{minimum}, got {list(pixels.shape)}")
    return pixels


def _same_shape(*images: np.ndarray) -> None:
    if len({image.shape for image in images}) != 1:
        raise MetricError(reason=f"image dimensions differ: {[list(image.shape) for image in images]}")


def spatial_frequency(img: Image) -> float:
    pixels = _pixels(img, 2) * PIXEL_SCALE
    count = pixels.size
    row_frequency = np.sum(np.diff(pixels, axis=1) ** 2) / count
    column_frequency = np.sum(np.diff(pixels, axis=0) ** 2) / count
    return float(np.sqrt(row_frequency + column_frequency))


def ssim(a: Image, b: Image) -> float:
    first, second = _pixels(a, SSIM_WINDOW, "a"), _pixels(b, SSIM_WINDOW, "b")
    _same_shape(first, second)

    windows_a = sliding_window_view(first, (SSIM_WINDOW, SSIM_WINDOW))
    windows_b = sliding_window_view(second, (SSIM_WINDOW, SSIM_WINDOW))
    mu_a = windows_a.mean(axis=(2, 3))
    mu_b = windows_b.mean(axis=(2, 3))
    centered_a = windows_a - mu_a[:, :, None, None]
    centered_b = windows_b - mu_b[:, :, None, None]
    var_a = (centered_a * centered_a).mean(axis=(2, 3))
    var_b = (centered_b * centered_b).mean(axis=(2, 3))
    covariance = (centered_a * centered_b).mean(axis=(2, 3))

    numerator = (2.0 * mu_a * mu_b + C1) * (2.0 * covariance + C2)
    denominator = (mu_a * mu_a + mu_b * mu_b + C1) * (var_a + var_b + C2)
    return float(np.mean(numerator / denominator))


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    energy = np.sum(dx * dx) * np.sum(dy * dy)
    if energy == 0.0:
        logger.warning("Zero variance term in correlation, counted as 0")
        return 0.0
    return float(np.sum(dx * dy) / np.sqrt(energy))


def scd(fused: Image, src_a: Image, src_b: Image) -> float:
    f, a, b = _pixels(fused, 2, "fused"), _pixels(src_a, 2, "src_a"), _pixels(src_b, 2, "src_b")
    _same_shape(f, a, b)
    return pearson(f - b, a) + pearson(f - a, b)


__all__ = [
    "C1",
    "C2",
    "SSIM_WINDOW",
    "spatial_frequency",
    "ssim",
    "scd",
    "pearson",
]
