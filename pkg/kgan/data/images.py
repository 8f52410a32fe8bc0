from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from kgan.errors import DatasetError, DomainError, ShapeError


class ImageGray:
    """Grayscale image with pixels in [0, 1], stored as an immutable [H, W] float64 array."""

    __slots__ = ("pixels",)

    def __init__(self, pixels: Any):
        array = np.array(pixels, dtype=np.float64)
        if array.ndim != 2 or min(array.shape, default=0) < 1:
            raise ShapeError(reason=f"grayscale images are [H, W] arrays, got {list(array.shape)}")
        if not np.all(np.isfinite(array)) or array.min() < 0.0 or array.max() > 1.0:
            raise DomainError(reason="pixels must lie in [0, 1]")
        array.setflags(write=False)
        self.pixels = array

    @classmethod
    def from_values(cls, height: int, width: int, values: Sequence[float]) -> "ImageGray":
        if len(values) != height * width:
            raise ShapeError(reason=f"{height}x{width} image needs {height * width} values, got {len(values)}")
        return cls(np.asarray(values, dtype=np.float64).reshape(height, width))

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def shape(self):
        return self.pixels.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ImageGray):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self) -> str:
        return f"ImageGray({self.height}x{self.width})"

    def flip_horizontal(self) -> "ImageGray":
        return ImageGray(self.pixels[:, ::-1])

    def flip_vertical(self) -> "ImageGray":
        return ImageGray(self.pixels[::-1, :])


@dataclass(frozen=True)
class ImagePair:
    """Co-registered modality A (MR-like) and modality B (CT-like) renderings of one phantom."""

    modality_a: ImageGray
    modality_b: ImageGray
    pair_id: int
    seed: int

    def __post_init__(self) -> None:
        if self.modality_a.shape != self.modality_b.shape:
            raise DatasetError(
                reason=f"pair {self.pair_id} mixes {list(self.modality_a.shape)} and {list(self.modality_b.shape)}"
            )

    @property
    def size(self) -> int:
        return self.modality_a.height


def stack(pairs: Sequence[ImagePair], modality: str) -> np.ndarray:
    """[n, 1, H, W] array of one modality of `pairs`."""
    if not pairs:
        raise DatasetError(reason="no image pairs given")
    images = [pair.modality_a if modality == "a" else pair.modality_b for pair in pairs]
    return np.stack([image.pixels for image in images])[:, None, :, :]


__all__ = [
    "ImageGray",
    "ImagePair",
    "stack",
]
