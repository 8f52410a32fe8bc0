"""
Binary PGM ("P5", maxval 255) reading and writing.

Pixels are stored as floor(v * 255 + 0.5) and read back as byte / 255, so a
saved image reloads to exactly its quantized values and saving it again
reproduces the file byte for byte.
"""
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from kgan.errors import PgmFormatError
from .images import ImageGray

MAGIC = b"P5"
MAXVAL = 255
WHITESPACE = b" \t\n\r\v\f"


def quantize(pixels: np.ndarray) -> np.ndarray:
    return np.floor(np.asarray(pixels) * MAXVAL + 0.5).astype(np.uint8)


def encode_pgm(img: ImageGray) -> bytes:
    header = b"%s\n%d %d\n%d\n" % (MAGIC, img.width, img.height, MAXVAL)
    return header + quantize(img.pixels).tobytes()


def _header_tokens(data: bytes) -> Tuple[List[Tuple[bytes, int]], int]:
    """Returns magic, width, height and maxval tokens with offsets, plus the payload offset."""
    tokens: List[Tuple[bytes, int]] = []
    offset = 0
    while len(tokens) < 4:
        if offset >= len(data):
            raise PgmFormatError(offset=offset, reason="header ends early")
        byte = data[offset : offset + 1]
        if byte in WHITESPACE:
            offset += 1
        elif byte == b"#":
            end = data.find(b"\n", offset)
            if end < 0:
                raise PgmFormatError(offset=offset, reason="unterminated header comment")
            offset = end + 1
        else:
            start = offset
            while offset < len(data) and data[offset : offset + 1] not in WHITESPACE + b"#":
                offset += 1
            tokens.append((data[start:offset], start))
    if offset >= len(data) or data[offset : offset + 1] not in WHITESPACE:
        raise PgmFormatError(offset=offset, reason="maxval must be followed by a single whitespace byte")
    return tokens, offset + 1


def _positive(token: Tuple[bytes, int], name: str) -> int:
    value, offset = token
    if not value.isdigit() or int(value) < 1:
        raise PgmFormatError(offset=offset, reason=f"{name} must be a positive integer, got {value!r}")
    return int(value)


def decode_pgm(data: bytes) -> ImageGray:
    if data[:2] != MAGIC:
        raise PgmFormatError(offset=0, reason=f"expected magic {MAGIC!r}, got {data[:2]!r}")

    tokens, payload = _header_tokens(data)
    if tokens[0][0] != MAGIC:
        raise PgmFormatError(offset=0, reason=f"expected magic {MAGIC!r}, got {tokens[0][0]!r}")
    width = _positive(tokens[1], "width")
    height = _positive(tokens[2], "height")
    maxval = _positive(tokens[3], "maxval")
    if maxval != MAXVAL:
        raise PgmFormatError(offset=tokens[3][1], reason=f"only maxval {MAXVAL} is supported, got {maxval}")

    expected = width * height
    available = len(data) - payload
    if available < expected:
        raise PgmFormatError(offset=len(data), reason=f"payload truncated, {available} of {expected} bytes present")
    if available > expected:
        raise PgmFormatError(offset=payload + expected, reason=f"{available - expected} unexpected trailing bytes")

    values = np.frombuffer(data, dtype=np.uint8, count=expected, offset=payload)
    return ImageGray(values.reshape(height, width) / float(MAXVAL))


def save_pgm(img: ImageGray, path: Union[str, Path]) -> None:
    Path(path).write_bytes(encode_pgm(img))


def load_pgm(path: Union[str, Path]) -> ImageGray:
    return decode_pgm(Path(path).read_bytes())


__all__ = [
    "quantize",
    "encode_pgm",
    "decode_pgm",
    "save_pgm",
    "load_pgm",
]
