from pathlib import Path
from typing import Tuple

from kgan.config import ExperimentConfig, TrainSection
from kgan.data import load_dataset, save_pgm
from kgan.distill import TeacherStudentPair, train_student
from kgan.gan import (
    SIDECAR_NAME,
    GanModel,
    Observer,
    TrainingHistory,
    build_student,
    build_teacher,
    load_checkpoint,
    save_checkpoint,
    train_gan,
)
from kgan.plotting import loss_curves
from .experiment_command import (
    CONFIG_OPTION,
    EXIT_SUCCESS,
    EXIT_USAGE,
    FORCE_OPTION,
    PLOT_OPTION,
    ExperimentCommand,
)

HISTORY_NAME = "history.csv"
PLOT_NAME = "loss.pgm"


class TrainCommand(ExperimentCommand):
    options = [CONFIG_OPTION, FORCE_OPTION, PLOT_OPTION]
    role = ""

    def section(self, config: ExperimentConfig) -> TrainSection:
        raise NotImplementedError

    def train(self, config: ExperimentConfig) -> Tuple[GanModel, TrainingHistory]:
        raise NotImplementedError

    def handle_experiment(self, config: ExperimentConfig) -> int:
        output_dir = Path(self.section(config).output_dir)
        if self.refuse_overwrite(output_dir / SIDECAR_NAME):
            return EXIT_USAGE

        model, history = self.train(config)

        save_checkpoint(model, output_dir)
        history.save_csv(output_dir / HISTORY_NAME)
        config.save(output_dir)
        if self.option("plot"):
            save_pgm(loss_curves(history), output_dir / PLOT_NAME)

        self.line(f"Saved {self.role} checkpoint ({model.parameter_count()} parameters) to `{output_dir}`.")
        return EXIT_SUCCESS

    def observer(self, section: TrainSection) -> Observer:
        return lambda event: self.report_epoch(event, section.epochs)


class TrainTeacherCommand(TrainCommand):
    """
    Trains the teacher GAN on the training split.

    train-teacher
        { --config= : Path to the experiment config }
        { --force : Overwrite an existing checkpoint }
        { --plot : Render loss curves }
    """

    name = "train-teacher"
    description = "Trains the teacher GAN on the training split"
    role = "teacher"

    def section(self, config: ExperimentConfig) -> TrainSection:
        return config.teacher

    def train(self, config: ExperimentConfig) -> Tuple[GanModel, TrainingHistory]:
        section = config.teacher
        split = load_dataset(config.data.output_dir)
        teacher = build_teacher(
            config.data.size, section.seed, section.mode, section.conditioning, latent_dim=section.latent_dim
        )
        self.info(f"Training teacher ({teacher.parameter_count()} parameters) on {len(split.train)} pairs...")

        return train_gan(teacher, split.train, section.training_config(), self.observer(section))


class TrainStudentCommand(TrainCommand):
    """
    Distills the trained teacher into the student GAN.

    train-student
        { --config= : Path to the experiment config }
        { --force : Overwrite an existing checkpoint }
        { --plot : Render loss curves }
    """

    name = "train-student"
    description = "Distills the trained teacher into the student GAN"
    role = "student"

    def section(self, config: ExperimentConfig) -> TrainSection:
        return config.student

    def train(self, config: ExperimentConfig) -> Tuple[GanModel, TrainingHistory]:
        section = config.student
        split = load_dataset(config.data.output_dir)
        teacher = load_checkpoint(config.teacher.output_dir)
        dcfg = section.distill_config()
        student = build_student(
            config.data.size,
            section.seed,
            dcfg.scale,
            section.mode,
            section.conditioning,
            latent_dim=section.latent_dim,
        )
        self.info(
            f"Distilling teacher ({teacher.parameter_count()} parameters) into student "
            f"({student.parameter_count()} parameters) on {len(split.train)} pairs..."
        )
        pair = TeacherStudentPair(teacher, student)
        return train_student(pair, split.train, section.training_config(), dcfg, self.observer(section))


__all__ = [
    "HISTORY_NAME",
    "PLOT_NAME",
    "TrainTeacherCommand",
    "TrainStudentCommand",
]
