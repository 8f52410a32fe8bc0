"""
Grayscale rasters written through the PGM codec.

`loss_curves` draws generator and discriminator loss per epoch (generator
loss solid black, discriminator loss dashed gray) inside a framed plot area;
`sample_mosaic` lays out source, reference and synthesized images side by
side, one pair per row.
"""
from typing import Sequence, Union

import numpy as np

from kgan.data import ImageGray, ImagePair
from kgan.errors import DomainError
from kgan.gan import TrainingHistory

PLOT_WIDTH = 320
PLOT_HEIGHT = 160
MARGIN = 8
BACKGROUND = 1.0
FRAME = 0.0
GENERATOR_INK = 0.0
DISCRIMINATOR_INK = 0.55
DASH = 4
GUTTER = 2


def _draw_line(canvas: np.ndarray, start: Sequence[float], end: Sequence[float], ink: float, dash: int = 0) -> None:
    steps = int(max(abs(end[0] - start[0]), abs(end[1] - start[1]))) + 1
    rows = np.rint(np.linspace(start[0], end[0], steps)).astype(int)
    columns = np.rint(np.linspace(start[1], end[1], steps)).astype(int)
    if dash:
        visible = (np.arange(steps) // dash) % 2 == 0
        rows, columns = rows[visible], columns[visible]
    canvas[rows, columns] = ink


def _polyline(canvas: np.ndarray, values: np.ndarray, low: float, high: float, ink: float, dash: int = 0) -> None:
    height, width = canvas.shape
    inner_height, inner_width = height - 2 * MARGIN - 1, width - 2 * MARGIN - 1
    span = high - low if high > low else 1.0
    rows = MARGIN + (1.0 - (values - low) / span) * inner_height
    if len(values) == 1:
        columns = np.array([MARGIN + inner_width / 2.0])
    else:
        columns = MARGIN + np.arange(len(values)) * inner_width / (len(values) - 1)

    points = list(zip(rows, columns))
    if len(points) == 1:
        _draw_line(canvas, points[0], points[0], ink)
    for start, end in zip(points, points[1:]):
        _draw_line(canvas, start, end, ink, dash)


def loss_curves(history: TrainingHistory, width: int = PLOT_WIDTH, height: int = PLOT_HEIGHT) -> ImageGray:
    if not len(history):
        raise DomainError(reason="cannot plot an empty training history")
    if min(width, height) <= 2 * MARGIN + 2:
        raise DomainError(reason=f"plot of {width}x{height} leaves no room for the curves")

    loss_g = np.array([record.loss_g for record in history])
    loss_d = np.array([record.loss_d for record in history])
    low = float(min(loss_g.min(), loss_d.min()))
    high = float(max(loss_g.max(), loss_d.max()))

    canvas = np.full((height, width), BACKGROUND)
    canvas[MARGIN - 1, MARGIN - 1 : width - MARGIN + 1] = FRAME
    canvas[height - MARGIN, MARGIN - 1 : width - MARGIN + 1] = FRAME
    canvas[MARGIN - 1 : height - MARGIN + 1, MARGIN - 1] = FRAME
    canvas[MARGIN - 1 : height - MARGIN + 1, width - MARGIN] = FRAME

    _polyline(canvas, loss_d, low, high, DISCRIMINATOR_INK, DASH)
    _polyline(canvas, loss_g, low, high, GENERATOR_INK)
    return ImageGray(canvas)


def sample_mosaic(pairs: Sequence[ImagePair], outputs: Union[np.ndarray, Sequence[np.ndarray]]) -> ImageGray:
    if not pairs or len(pairs) != len(outputs):
        raise DomainError(reason=f"need one output per pair, got {len(outputs)} outputs for {len(pairs)} pairs")

    size = pairs[0].size
    rows = []
    for pair, output in zip(pairs, outputs):
        tiles = [pair.modality_a.pixels, pair.modality_b.pixels, np.asarray(output, dtype=np.float64)]
        row = np.full((size, 3 * size + 2 * GUTTER), BACKGROUND)
        for index, tile in enumerate(tiles):
            left = index * (size + GUTTER)
            row[:, left : left + size] = tile
        rows.append(row)
        rows.append(np.full((GUTTER, row.shape[1]), BACKGROUND))

    return ImageGray(np.vstack(rows[:-1]))


__all__ = [
    "loss_curves",
    "sample_mosaic",
]
