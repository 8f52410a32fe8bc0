from typing import Tuple, Union

import numpy as np

from kgan.errors import DomainError
from kgan.prng import Xorshift64Star
from .images import ImageGray, ImagePair

FLIP_PROBABILITY = 0.5


def augment_flip(pair: ImagePair, rng: Xorshift64Star) -> ImagePair:
    """
    Flips both modalities together: horizontally, then vertically, each with probability 0.5.

    Exactly two draws are taken from `rng` per call.
    """
    horizontal = rng.uniform() < FLIP_PROBABILITY
    vertical = rng.uniform() < FLIP_PROBABILITY
    if not (horizontal or vertical):
        return pair

    a, b = pair.modality_a, pair.modality_b
    if horizontal:
        a, b = a.flip_horizontal(), b.flip_horizontal()
    if vertical:
        a, b = a.flip_vertical(), b.flip_vertical()
    return ImagePair(a, b, pair.pair_id, pair.seed)


def resize_nearest(img: ImageGray, new_size: Union[int, Tuple[int, int]]) -> ImageGray:
    """Nearest neighbour resampling, target pixel i reads source pixel floor((i + 0.5) * H / H')."""
    height, width = (new_size, new_size) if isinstance(new_size, int) else new_size
    if height < 2 or width < 2:
        raise DomainError(reason=f"resized images need at least 2x2 pixels, got {height}x{width}")

    rows = np.floor((np.arange(height) + 0.5) * img.height / height).astype(int)
    cols = np.floor((np.arange(width) + 0.5) * img.width / width).astype(int)
    return ImageGray(img.pixels[np.ix_(rows, cols)])


__all__ = [
    "FLIP_PROBABILITY",
    "augment_flip",
    "resize_nearest",
]
