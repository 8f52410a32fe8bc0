from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
from cleo.helpers import option

from kgan.config import ExperimentConfig
from kgan.data import ImagePair, load_dataset, save_pgm
from kgan.errors import ConfigError
from kgan.gan import load_checkpoint, synthesize
from kgan.metrics import MetricsReport, comparison_csv, evaluate_outputs
from kgan.plotting import sample_mosaic
from .experiment_command import CONFIG_OPTION, EXIT_SUCCESS, EXIT_USAGE, FORCE_OPTION, ExperimentCommand

METRICS_NAME = "metrics.csv"
SAMPLES_NAME = "samples.pgm"
COMPARISON_NAME = "comparison.csv"


def _score(checkpoint: str, test: List[ImagePair]) -> Tuple[MetricsReport, np.ndarray]:
    model = load_checkpoint(checkpoint)
    outputs = synthesize(model, [pair.modality_a.pixels for pair in test])
    return evaluate_outputs(test, outputs), outputs


class EvaluateCommand(ExperimentCommand):
    """
    Scores a generator checkpoint on the test split with SF, SSIM and SCD.

    evaluate
        { --config= : Path to the experiment config }
        { --checkpoint= : Checkpoint directory, the student's output directory by default }
        { --samples= : Number of test pairs rendered to samples.pgm }
        { --force : Overwrite an existing report }
    """

    name = "evaluate"
    description = "Scores a generator checkpoint on the test split with SF, SSIM and SCD"
    options = [
        CONFIG_OPTION,
        FORCE_OPTION,
        option(
            long_name="checkpoint",
            description="Checkpoint directory, the student's output directory by default",
            flag=False,
            default=None,
        ),
        option(
            long_name="samples",
            description="Number of test pairs rendered side by side to samples.pgm",
            flag=False,
            default=None,
        ),
    ]

    def samples(self, config: ExperimentConfig) -> int:
        raw = self.option("samples")
        if raw is None:
            return config.eval.samples
        try:
            samples = int(raw)
        except ValueError as error:
            raise ConfigError("Option --samples must be an integer, got `{value}`.", value=raw) from error
        if samples < 0:
            raise ConfigError("Option --samples must be >= 0, got `{value}`.", value=raw)
        return samples

    def handle_experiment(self, config: ExperimentConfig) -> int:
        output_dir = Path(config.eval.output_dir)
        samples = self.samples(config)
        if self.refuse_overwrite(output_dir / METRICS_NAME):
            return EXIT_USAGE

        checkpoint = self.option("checkpoint") or config.student.output_dir
        test = load_dataset(config.data.output_dir).test
        self.info(f"Evaluating `{checkpoint}` on {len(test)} test pairs...")
        report, outputs = _score(checkpoint, test)

        output_dir.mkdir(parents=True, exist_ok=True)
        report.save_csv(output_dir / METRICS_NAME)
        config.save(output_dir)
        if samples:
            save_pgm(sample_mosaic(test[:samples], outputs[:samples]), output_dir / SAMPLES_NAME)

        self.line(report.summary())
        return EXIT_SUCCESS


class CompareCommand(ExperimentCommand):
    """
    Scores several checkpoints on the same test split.

    compare
        { --config= : Path to the experiment config }
        { --checkpoint=* : Checkpoint directories, teacher and student by default }
        { --force : Overwrite an existing comparison }
    """

    name = "compare"
    description = "Scores several checkpoints on the same test split and writes comparison.csv"
    options = [
        CONFIG_OPTION,
        FORCE_OPTION,
        option(
            long_name="checkpoint",
            description="Checkpoint directory, repeat for every method; teacher and student by default",
            flag=False,
            multiple=True,
        ),
    ]

    def handle_experiment(self, config: ExperimentConfig) -> int:
        output_dir = Path(config.eval.output_dir)
        if self.refuse_overwrite(output_dir / COMPARISON_NAME):
            return EXIT_USAGE

        checkpoints = self.option("checkpoint") or [config.teacher.output_dir, config.student.output_dir]
        methods = [Path(checkpoint).name or str(checkpoint) for checkpoint in checkpoints]
        if len(set(methods)) != len(methods):
            raise ConfigError("Checkpoint directories must have distinct names, got {methods}.", methods=methods)

        test = load_dataset(config.data.output_dir).test
        reports: Dict[str, MetricsReport] = {}
        for method, checkpoint in zip(methods, checkpoints):
            reports[method], _ = _score(checkpoint, test)
            self.line(f"{method}: {reports[method].summary()}")

        output_dir.mkdir(parents=True, exist_ok=True)
        (output_dir / COMPARISON_NAME).write_text(comparison_csv(reports))
        config.save(output_dir)
        return EXIT_SUCCESS


__all__ = [
    "METRICS_NAME",
    "SAMPLES_NAME",
    "COMPARISON_NAME",
    "EvaluateCommand",
    "CompareCommand",
]
