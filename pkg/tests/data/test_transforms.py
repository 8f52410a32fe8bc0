import numpy as np
import pytest

from kgan.data import ImageGray, ImagePair, augment_flip, resize_nearest
from kgan.errors import DomainError
from kgan.prng import Xorshift64Star


def _pair() -> ImagePair:
    pixels = np.arange(16.0).reshape(4, 4) / 15.0
    return ImagePair(ImageGray(pixels), ImageGray(1.0 - pixels), 0, 0)


def test_augment_flip_moves_modalities_together() -> None:
    rng = Xorshift64Star(0)
    pair = _pair()

    for _ in range(20):
        flipped = augment_flip(pair, rng)
        assert np.allclose(flipped.modality_a.pixels + flipped.modality_b.pixels, 1.0)
        assert flipped.pair_id == pair.pair_id


def test_augment_flip_takes_two_draws() -> None:
    rng, reference = Xorshift64Star(4), Xorshift64Star(4)

    augment_flip(_pair(), rng)
    reference.uniform()
    reference.uniform()

    assert rng.next_u64() == reference.next_u64()


def test_augment_flip_hits_every_orientation() -> None:
    rng = Xorshift64Star(1)
    pair = _pair()

    seen = {augment_flip(pair, rng).modality_a.pixels.tobytes() for _ in range(64)}

    assert len(seen) == 4


def test_resize_nearest_downsamples() -> None:
    image = ImageGray(np.arange(16.0).reshape(4, 4) / 15.0)

    resized = resize_nearest(image, 2)

    assert np.allclose(resized.pixels * 15.0, [[5.0, 7.0], [13.0, 15.0]])


def test_resize_nearest_upsamples() -> None:
    image = ImageGray([[0.0, 1.0], [1.0, 0.0]])

    resized = resize_nearest(image, (4, 2))

    assert resized.shape == (4, 2)
    assert resized.pixels[:, 0].tolist() == [0.0, 0.0, 1.0, 1.0]


def test_fail_resize_below_two_pixels() -> None:
    with pytest.raises(DomainError):
        resize_nearest(ImageGray(np.zeros((4, 4))), 1)
