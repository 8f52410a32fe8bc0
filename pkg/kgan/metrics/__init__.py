from .measures import C1, C2, SSIM_WINDOW, pearson, scd, spatial_frequency, ssim
from .report import (
    COMPARISON_COLUMNS,
    REPORT_COLUMNS,
    MetricsReport,
    MetricsRow,
    comparison_csv,
    evaluate,
    evaluate_outputs,
    format_value,
    round_significant,
)

__all__ = [
    "C1",
    "C2",
    "SSIM_WINDOW",
    "COMPARISON_COLUMNS",
    "REPORT_COLUMNS",
    "MetricsReport",
    "MetricsRow",
    "comparison_csv",
    "evaluate",
    "evaluate_outputs",
    "format_value",
    "pearson",
    "round_significant",
    "scd",
    "spatial_frequency",
    "ssim",
]
