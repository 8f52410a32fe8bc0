import logging
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from kgan.autodiff import Graph, Tensor, backward
from kgan.data import ImagePair, augment_flip, check_pairs, stack
from kgan.errors import DomainError, KganError, TrainingError
from kgan.nn import ParameterSet
from kgan.prng import Xorshift64Star, derive_seed
from .losses import discriminator_loss, generator_loss, mean_absolute_error, wgan_generator_loss, wgan_losses
from .models import GanModel, score
from .optim import OPTIMIZERS, OptimizerConfig, OptimizerState, optimizer_step

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("epoch", "loss_g", "loss_d", "mean_d_real", "mean_d_fake")
DEFAULT_D_STEPS = {"standard": 1, "wasserstein": 5}

# independent PRNG streams derived from the training seed
SHUFFLE_STREAM = 0
AUGMENT_STREAM = 1
NOISE_STREAM = 2


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 10
    batch_size: int = 8
    learning_rate_g: float = 2e-4
    learning_rate_d: float = 2e-4
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_w: float = 0.01
    seed: int = 0
    d_steps_per_g_step: Optional[int] = None
    reconstruction_weight: float = 0.0
    augment: bool = True

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise DomainError(reason=f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise DomainError(reason=f"batch size must be >= 1, got {self.batch_size}")
        if self.learning_rate_g <= 0 or self.learning_rate_d <= 0:
            raise DomainError(reason="learning rates must be positive")
        if self.optimizer not in OPTIMIZERS:
            raise DomainError(reason=f"optimizer must be one of {list(OPTIMIZERS)}, got `{self.optimizer}`")
        if self.clip_w <= 0:
            raise DomainError(reason=f"clip_w must be positive, got {self.clip_w}")
        if self.d_steps_per_g_step is not None and self.d_steps_per_g_step < 1:
            raise DomainError(reason=f"d_steps_per_g_step must be >= 1, got {self.d_steps_per_g_step}")
        if self.reconstruction_weight < 0:
            raise DomainError(reason=f"reconstruction weight must be >= 0, got {self.reconstruction_weight}")

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(self.optimizer, self.beta1, self.beta2, self.eps)

    def critic_steps(self, mode: str) -> int:
        if self.d_steps_per_g_step is not None:
            return self.d_steps_per_g_step
        return DEFAULT_D_STEPS[mode]


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss_g: float
    loss_d: float
    mean_d_real: float
    mean_d_fake: float
    wall_clock: float = 0.0

    def csv_row(self) -> str:
        return ",".join([str(self.epoch)] + [repr(value) for value in self.values()])

    def values(self) -> Tuple[float, float, float, float]:
        return self.loss_g, self.loss_d, self.mean_d_real, self.mean_d_fake


@dataclass
class TrainingHistory:
    """One record per completed epoch; wall-clock seconds are not part of the CSV."""

    records: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[EpochRecord]:
        return iter(self.records)

    def to_csv(self) -> str:
        return "\n".join([",".join(HISTORY_COLUMNS)] + [record.csv_row() for record in self.records]) + "\n"

    def save_csv(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "TrainingHistory":
        lines = text.strip().splitlines()
        if not lines or tuple(lines[0].split(",")) != HISTORY_COLUMNS:
            raise DomainError(reason=f"history CSV must start with `{','.join(HISTORY_COLUMNS)}`")
        records = []
        for line in lines[1:]:
            epoch, *values = line.split(",")
            records.append(EpochRecord(int(epoch), *(float(value) for value in values)))
        return cls(records)


class TrainingEvent(NamedTuple):
    """Emitted after every critic step, generator step and epoch (`kind`: critic_step, generator_step, epoch)."""

    kind: str
    epoch: int
    batch: Optional[int]
    model: GanModel
    record: Optional[EpochRecord] = None
    loss: Optional[float] = None


Observer = Callable[[TrainingEvent], None]


@dataclass(frozen=True)
class Batch:
    source: Tensor
    real: Tensor

    @property
    def size(self) -> int:
        return self.source.shape[0]


class AdversarialTrainer:
    """
    Alternating GAN training.

    Every batch gets `d_steps_per_g_step` discriminator updates followed by one
    generator update. Batch order, flips and noise come from separate streams
    derived from `cfg.seed`, so a run is a pure function of (model, data, cfg).
    Subclasses change the objectives, not the loop.
    """

    def __init__(
        self, model: GanModel, data: Sequence[ImagePair], cfg: TrainingConfig, observer: Optional[Observer] = None
    ):
        check_pairs(data, model.image_size)
        self.model = model.copy()
        self.data = list(data)
        self.cfg = cfg
        self.observer = observer
        self.optimizer = cfg.optimizer_config()
        self.critic_steps = cfg.critic_steps(model.mode)
        self.shuffle_rng = Xorshift64Star(derive_seed(cfg.seed, SHUFFLE_STREAM))
        self.augment_rng = Xorshift64Star(derive_seed(cfg.seed, AUGMENT_STREAM))
        self.noise_rng = Xorshift64Star(derive_seed(cfg.seed, NOISE_STREAM))
        if self.optimizer.name == "adam":
            self.model.generator_state = self.model.generator_state or OptimizerState()
            self.model.discriminator_state = self.model.discriminator_state or OptimizerState()

    @property
    def wasserstein(self) -> bool:
        return self.model.mode == "wasserstein"

    def run(self) -> Tuple[GanModel, TrainingHistory]:
        history = TrainingHistory()
        for epoch in range(1, self.cfg.epochs + 1):
            started = time.perf_counter()
            order = self.shuffle_rng.permutation(range(len(self.data)))
            totals = np.zeros(4)
            batches = 0
            for batch_index, start in enumerate(range(0, len(order), self.cfg.batch_size)):
                batch = self._batch([self.data[index] for index in order[start : start + self.cfg.batch_size]])
                loss_d, mean_real, mean_fake = 0.0, 0.0, 0.0
                for _ in range(self.critic_steps):
                    loss_d, mean_real, mean_fake = self._critic_step(epoch, batch_index, batch)
                loss_g = self._generator_step(epoch, batch_index, batch)
                totals += (loss_g, loss_d, mean_real, mean_fake)
                batches += 1

            means = totals / batches
            record = EpochRecord(epoch, *(float(value) for value in means), time.perf_counter() - started)
            history.records.append(record)
            logger.info(
                "Epoch %d: loss_g=%.6f loss_d=%.6f mean_d_real=%.4f mean_d_fake=%.4f",
                epoch,
                record.loss_g,
                record.loss_d,
                record.mean_d_real,
                record.mean_d_fake,
            )
            self._notify("epoch", epoch, None, record=record)
        return self.model, history

    def _batch(self, pairs: List[ImagePair]) -> Batch:
        if self.cfg.augment:
            pairs = [augment_flip(pair, self.augment_rng) for pair in pairs]
        return Batch(source=Tensor(stack(pairs, "a")), real=Tensor(stack(pairs, "b")))

    def generator_input(self, batch: Batch) -> Tensor:
        if self.model.conditioning == "noise":
            return self.model.sample_noise(batch.size, self.noise_rng)
        return batch.source

    def adversarial_loss(self, real_logits: Tensor, fake_logits: Tensor) -> Tuple[Tensor, Tensor, Tensor]:
        """Returns (discriminator loss to minimize, D on real, D on fake)."""
        d_real = score(real_logits, self.model.mode)
        d_fake = score(fake_logits, self.model.mode)
        if self.wasserstein:
            objective, _ = wgan_losses(d_real, d_fake)
            return -objective, d_real, d_fake
        return discriminator_loss(d_real, d_fake), d_real, d_fake

    def discriminator_objective(
        self, batch: Batch, fake: Tensor, params: ParameterSet
    ) -> Tuple[Tensor, Tensor, Tensor]:
        real_logits = self.model.logits(batch.real, batch.source, params)
        fake_logits = self.model.logits(fake, batch.source, params)
        return self.adversarial_loss(real_logits, fake_logits)

    def generator_objective(self, batch: Batch, inputs: Tensor, fake: Tensor) -> Tensor:
        d_fake = self.model.discriminate(fake, batch.source)
        loss = wgan_generator_loss(d_fake) if self.wasserstein else generator_loss(d_fake)
        if self.cfg.reconstruction_weight > 0 and self.model.conditioning == "image":
            loss = loss + mean_absolute_error(fake, batch.real) * self.cfg.reconstruction_weight
        return loss

    def _critic_step(self, epoch: int, batch_index: int, batch: Batch) -> Tuple[float, float, float]:
        with self._phase(epoch, batch_index, "critic"):
            fake = self.model.generate(self.generator_input(batch))
            with Graph() as graph:
                params = self.model.discriminator_params.track()
                loss, d_real, d_fake = self.discriminator_objective(batch, fake, params)
                value = self._finite(loss, epoch, batch_index, "critic")
                grads = backward(graph, loss)
            updated = optimizer_step(
                params, grads, self.optimizer, self.cfg.learning_rate_d, self.model.discriminator_state
            )

        if self.wasserstein:
            updated = updated.clip(self.cfg.clip_w)
        self.model.discriminator_params = updated
        logger.debug("epoch %d batch %d critic loss %.6f", epoch, batch_index, value)
        self._notify("critic_step", epoch, batch_index, loss=value)
        return value, float(d_real.data.mean()), float(d_fake.data.mean())

    def _generator_step(self, epoch: int, batch_index: int, batch: Batch) -> float:
        with self._phase(epoch, batch_index, "generator"):
            inputs = self.generator_input(batch)
            with Graph() as graph:
                params = self.model.generator_params.track()
                loss = self.generator_objective(batch, inputs, self.model.generate(inputs, params))
                value = self._finite(loss, epoch, batch_index, "generator")
                grads = backward(graph, loss)
            self.model.generator_params = optimizer_step(
                params, grads, self.optimizer, self.cfg.learning_rate_g, self.model.generator_state
            )

        logger.debug("epoch %d batch %d generator loss %.6f", epoch, batch_index, value)
        self._notify("generator_step", epoch, batch_index, loss=value)
        return value

    @staticmethod
    def _finite(loss: Tensor, epoch: int, batch_index: int, phase: str) -> float:
        value = loss.item()
        if not math.isfinite(value):
            raise TrainingError(epoch=epoch, batch=batch_index, phase=phase, reason="loss is not finite")
        return value

    @contextmanager
    def _phase(self, epoch: int, batch_index: int, phase: str) -> Iterator[None]:
        try:
            yield
        except TrainingError:
            raise
        except KganError as error:
            raise TrainingError(epoch=epoch, batch=batch_index, phase=phase, reason=str(error)) from error

    def _notify(self, kind: str, epoch: int, batch_index: Optional[int], **kwargs) -> None:
        if self.observer is not None:
            self.observer(TrainingEvent(kind, epoch, batch_index, self.model, **kwargs))


def train_gan(
    model: GanModel, data: Sequence[ImagePair], cfg: TrainingConfig, observer: Optional[Observer] = None
) -> Tuple[GanModel, TrainingHistory]:
    return AdversarialTrainer(model, data, cfg, observer).run()


__all__ = [
    "HISTORY_COLUMNS",
    "TrainingConfig",
    "TrainingHistory",
    "TrainingEvent",
    "EpochRecord",
    "Observer",
    "Batch",
    "AdversarialTrainer",
    "train_gan",
]
