from pathlib import Path

from kgan.config import ExperimentConfig
from kgan.data import MANIFEST_NAME, make_split, save_dataset
from .experiment_command import EXIT_SUCCESS, EXIT_USAGE, ExperimentCommand


class GenerateDataCommand(ExperimentCommand):
    """
    Renders the paired phantom dataset and its train/test split.

    gen-data
        { --config= : Path to the experiment config }
        { --force : Overwrite an existing dataset }
    """

    name = "gen-data"
    description = "Renders the paired phantom dataset and its train/test split"

    def handle_experiment(self, config: ExperimentConfig) -> int:
        data = config.data
        output_dir = Path(data.output_dir)
        if self.refuse_overwrite(output_dir / MANIFEST_NAME):
            return EXIT_USAGE

        self.info(f"Rendering {data.n_pairs} phantom pairs of {data.size}x{data.size} pixels...")
        split = make_split(data.n_pairs, data.size, data.master_seed, data.train_fraction)
        manifest = save_dataset(split, output_dir)
        config.save(output_dir)

        self.line(f"Wrote {len(split)} pairs ({len(split.train)} train / {len(split.test)} test) to `{manifest}`.")
        return EXIT_SUCCESS


__all__ = [
    "GenerateDataCommand",
]
