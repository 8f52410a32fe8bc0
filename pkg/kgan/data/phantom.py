"""
Seeded two-modality ellipse phantoms.

One phantom is a stack of 3 to 7 rotated ellipses painted in order over a
dark background; the first one is large and outlines the body. Each ellipse
carries a tissue value t in [0.2, 1]. The two modalities render the same
tissue map through different contrast curves:

* modality A (MR-like) brightens mid-range soft tissue and darkens the
  densest structures, plus a mild smooth noise field;
* modality B (CT-like) separates dense tissue (t >= 0.7) by a threshold and
  accents tissue boundaries with the gradient magnitude of the tissue map.
"""
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from kgan.errors import DatasetError
from kgan.prng import Xorshift64Star
from .images import ImageGray, ImagePair

PHANTOM_SIZES = (8, 16, 32, 64, 128, 256)
MIN_ELLIPSES = 3
MAX_ELLIPSES = 7
MIN_TISSUE = 0.2
NOISE_AMPLITUDE = 0.03
DENSE_THRESHOLD = 0.7
EDGE_WEIGHT = 0.2


def _grid(size: int):
    # pixel centers in [-1, 1]
    axis = (np.arange(size) + 0.5) / size * 2.0 - 1.0
    return np.meshgrid(axis, axis)


def _ellipse_mask(x: np.ndarray, y: np.ndarray, center, axes, angle: float) -> np.ndarray:
    dx, dy = x - center[0], y - center[1]
    cos, sin = math.cos(angle), math.sin(angle)
    u = (dx * cos + dy * sin) / axes[0]
    v = (-dx * sin + dy * cos) / axes[1]
    return u * u + v * v <= 1.0


def tissue_map(rng: Xorshift64Star, size: int) -> np.ndarray:
    x, y = _grid(size)
    tissue = np.zeros((size, size))
    count = rng.randint(MIN_ELLIPSES, MAX_ELLIPSES)
    for index in range(count):
        if index == 0:
            center = (rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1))
            axes = (rng.uniform(0.6, 0.9), rng.uniform(0.6, 0.9))
        else:
            center = (rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
            axes = (rng.uniform(0.1, 0.35), rng.uniform(0.1, 0.35))
        angle = rng.uniform(0.0, math.pi)
        value = rng.uniform(MIN_TISSUE, 1.0)
        tissue[_ellipse_mask(x, y, center, axes, angle)] = value
    return tissue


def _smooth_noise(rng: Xorshift64Star, size: int) -> np.ndarray:
    cells = max(2, size // 4)
    coarse = rng.normal_array(cells * cells).reshape(cells, cells)
    repeat = math.ceil(size / cells)
    field = np.kron(coarse, np.ones((repeat, repeat)))[:size, :size]
    padded = np.pad(field, 1, mode="edge")
    return sliding_window_view(padded, (3, 3)).mean(axis=(2, 3))


def render_modality_a(tissue: np.ndarray, noise: np.ndarray) -> np.ndarray:
    foreground = tissue > 0.0
    soft = 0.25 + 0.65 * np.sin(math.pi * tissue)
    image = np.where(foreground, soft + NOISE_AMPLITUDE * noise, 0.0)
    return np.clip(image, 0.0, 1.0)


def render_modality_b(tissue: np.ndarray) -> np.ndarray:
    foreground = tissue > 0.0
    dense = tissue >= DENSE_THRESHOLD
    base = np.where(dense, 0.85 + 0.15 * (tissue - DENSE_THRESHOLD) / (1.0 - DENSE_THRESHOLD), 0.15 + 0.35 * tissue)
    grad_rows, grad_cols = np.gradient(tissue)
    edges = np.hypot(grad_rows, grad_cols)
    if edges.max() > 0.0:
        edges = edges / edges.max()
    image = np.where(foreground, base + EDGE_WEIGHT * edges, 0.0)
    return np.clip(image, 0.0, 1.0)


def generate_phantom_pair(seed: int, size: int, pair_id: int = 0) -> ImagePair:
    if size not in PHANTOM_SIZES:
        raise DatasetError(reason=f"phantom size must be one of {list(PHANTOM_SIZES)}, got {size}")

    rng = Xorshift64Star(seed)
    tissue = tissue_map(rng, size)
    noise = _smooth_noise(rng, size)
    return ImagePair(
        modality_a=ImageGray(render_modality_a(tissue, noise)),
        modality_b=ImageGray(render_modality_b(tissue)),
        pair_id=pair_id,
        seed=seed,
    )


__all__ = [
    "PHANTOM_SIZES",
    "generate_phantom_pair",
    "tissue_map",
    "render_modality_a",
    "render_modality_b",
]
