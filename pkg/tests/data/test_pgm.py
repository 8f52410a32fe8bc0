import numpy as np
import pytest

from kgan.data import ImageGray, decode_pgm, encode_pgm, load_pgm, save_pgm
from kgan.errors import PgmFormatError


def test_encode_pgm() -> None:
    image = ImageGray([[0.0, 1.0], [0.5, 0.2]])

    assert encode_pgm(image) == b"P5\n2 2\n255\n\x00\xff\x80\x33"


def test_decode_pgm_with_comments() -> None:
    data = b"P5 # binary\n# a comment line\n3 1\n255\n\x00\x80\xff"

    image = decode_pgm(data)

    assert image.shape == (1, 3)
    assert np.allclose(image.pixels, [[0.0, 128 / 255, 1.0]])


def test_quantized_image_reencodes_byte_for_byte() -> None:
    image = ImageGray(np.random.default_rng(0).uniform(size=(5, 7)))
    data = encode_pgm(image)

    assert encode_pgm(decode_pgm(data)) == data
    assert np.max(np.abs(decode_pgm(data).pixels - image.pixels)) <= 0.5 / 255 + 1e-12


def test_save_and_load(tmp_path) -> None:
    image = ImageGray([[0.0, 1.0, 0.2]])
    path = tmp_path / "image.pgm"

    save_pgm(image, path)

    assert encode_pgm(load_pgm(path)) == path.read_bytes()


@pytest.mark.parametrize(
    "data, offset",
    [
        [b"P2\n1 1\n255\n\x00", 0],
        [b"P5\n1 1\n", 7],
        [b"P5\n0 1\n255\n", 3],
        [b"P5\n1 1\n65535\n\x00\x00", 7],
        [b"P5\n2 2\n255\n\x00", 12],
        [b"P5\n1 1\n255\n\x00\x00", 12],
    ],
)
def test_fail_decode_malformed_pgm(data: bytes, offset: int) -> None:
    with pytest.raises(PgmFormatError) as error:
        decode_pgm(data)

    assert error.value.context["offset"] == offset
