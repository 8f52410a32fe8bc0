from pathlib import Path
from typing import Optional

from cleo.commands.command import Command
from cleo.helpers import option

from kgan.config import ExperimentConfig, load_config
from kgan.errors import ConfigError, KganError
from kgan.gan import TrainingEvent

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

CONFIG_OPTION = option(
    long_name="config",
    description="Path to the experiment config (.json, .yaml or .yml); defaults apply when omitted",
    flag=False,
    default=None,
)
FORCE_OPTION = option(
    long_name="force",
    description="Overwrite outputs of a previous run",
)
PLOT_OPTION = option(
    long_name="plot",
    description="Also render the loss curves to loss.pgm",
)


class ExperimentCommand(Command):
    """
    Loads the experiment config and maps failures to exit codes.

    Subclasses implement `handle_experiment`; config and usage errors exit
    with 1, any other library or file system error with 2.
    """

    options = [CONFIG_OPTION, FORCE_OPTION]

    def handle(self) -> int:
        try:
            config = load_config(self.option("config"))
            return self.handle_experiment(config)
        except ConfigError as error:
            self.line_error(f"<error>{error}</error>")
            return EXIT_USAGE
        except (KganError, OSError) as error:
            self.line_error(f"<error>{error}</error>")
            return EXIT_RUNTIME

    def handle_experiment(self, config: ExperimentConfig) -> int:
        raise NotImplementedError

    def refuse_overwrite(self, marker: Path) -> bool:
        if marker.exists() and not self.option("force"):
            self.line_error(f"<error>Output `{marker}` already exists, pass --force to overwrite it.</error>")
            return True
        return False

    def report_epoch(self, event: TrainingEvent, epochs: Optional[int] = None) -> None:
        if event.kind != "epoch" or event.record is None:
            return
        record = event.record
        self.info(
            f"Epoch {record.epoch}/{epochs}: loss_g={record.loss_g:.6f} loss_d={record.loss_d:.6f} "
            f"D(real)={record.mean_d_real:.4f} D(fake)={record.mean_d_fake:.4f}"
        )


__all__ = [
    "EXIT_SUCCESS",
    "EXIT_USAGE",
    "EXIT_RUNTIME",
    "CONFIG_OPTION",
    "FORCE_OPTION",
    "PLOT_OPTION",
    "ExperimentCommand",
]
