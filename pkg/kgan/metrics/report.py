from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from kgan.data import ImageGray, ImagePair
from kgan.errors import MetricError
from kgan.gan import GanModel, synthesize
from .measures import scd, spatial_frequency, ssim

REPORT_COLUMNS = ("id", "sf", "ssim", "scd")
COMPARISON_COLUMNS = ("method", "sf", "ssim", "scd")
SIGNIFICANT_DIGITS = 6

Synthesizer = Callable[[np.ndarray], np.ndarray]


def format_value(value: float) -> str:
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def round_significant(value: float) -> float:
    return float(format_value(value))


@dataclass(frozen=True)
class MetricsRow:
    id: int
    sf: float
    ssim: float
    scd: float

    def values(self) -> Tuple[float, float, float]:
        return self.sf, self.ssim, self.scd


@dataclass
class MetricsReport:
    """
    Per-image SF/SSIM/SCD rows plus aggregates.

    Every CSV value, rows and aggregates alike, is written with 6 significant
    digits. Row values are kept rounded to that precision and the mean and
    population standard deviation are computed from the rounded rows.
    """

    rows: List[MetricsRow] = field(default_factory=list)

    def add(self, pair_id: int, sf: float, ssim_value: float, scd_value: float) -> MetricsRow:
        row = MetricsRow(pair_id, round_significant(sf), round_significant(ssim_value), round_significant(scd_value))
        self.rows.append(row)
        return row

    def _matrix(self) -> np.ndarray:
        if not self.rows:
            raise MetricError(reason="the report has no rows")
        return np.array([row.values() for row in self.rows])

    @property
    def mean(self) -> Tuple[float, float, float]:
        sf, ssim_value, scd_value = self._matrix().mean(axis=0)
        return float(sf), float(ssim_value), float(scd_value)

    @property
    def std(self) -> Tuple[float, float, float]:
        sf, ssim_value, scd_value = self._matrix().std(axis=0)
        return float(sf), float(ssim_value), float(scd_value)

    def summary(self) -> str:
        sf, ssim_value, scd_value = self.mean
        return f"SF={sf:.6f} SSIM={ssim_value:.6f} SCD={scd_value:.6f}"

    def to_csv(self) -> str:
        lines = [",".join(REPORT_COLUMNS)]
        for row in self.rows:
            lines.append(",".join([str(row.id)] + [format_value(value) for value in row.values()]))
        lines.append(",".join(["mean"] + [format_value(value) for value in self.mean]))
        lines.append(",".join(["std"] + [format_value(value) for value in self.std]))
        return "\n".join(lines) + "\n"

    def save_csv(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_csv())


def evaluate_outputs(test: Sequence[ImagePair], outputs: np.ndarray) -> MetricsReport:
    report = MetricsReport()
    for pair, output in zip(test, outputs):
        fused = ImageGray(output)
        report.add(
            pair.pair_id,
            spatial_frequency(fused),
            ssim(fused, pair.modality_b),
            scd(fused, pair.modality_a, pair.modality_b),
        )
    return report


def evaluate(model: Union[GanModel, Synthesizer], test: Sequence[ImagePair]) -> MetricsReport:
    """
    Runs the generator on modality A of every pair and scores the output.

    SF is taken on the output, SSIM against modality B and SCD against both
    sources. `model` may also be any callable mapping [n, H, W] sources to
    [n, H, W] outputs.
    """
    if not test:
        raise MetricError(reason="the test set is empty")
    sources = np.stack([pair.modality_a.pixels for pair in test])
    outputs = synthesize(model, sources) if isinstance(model, GanModel) else np.asarray(model(sources))
    if outputs.shape != sources.shape:
        raise MetricError(reason=f"outputs {list(outputs.shape)} do not match sources {list(sources.shape)}")
    return evaluate_outputs(test, outputs)


def comparison_csv(reports: Mapping[str, MetricsReport]) -> str:
    """One line of aggregate means per method, in the given order."""
    lines = [",".join(COMPARISON_COLUMNS)]
    for method, report in reports.items():
        lines.append(",".join([method] + [format_value(value) for value in report.mean]))
    return "\n".join(lines) + "\n"


__all__ = [
    "REPORT_COLUMNS",
    "COMPARISON_COLUMNS",
    "MetricsRow",
    "MetricsReport",
    "Synthesizer",
    "evaluate",
    "evaluate_outputs",
    "comparison_csv",
    "format_value",
    "round_significant",
]
