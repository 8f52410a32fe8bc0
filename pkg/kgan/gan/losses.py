from typing import Tuple

from kgan.autodiff import Tensor, clamped_log, elementwise
from kgan.errors import ShapeError


def _check_batch(name: str, values: Tensor) -> None:
    if values.data.ndim != 1:
        raise ShapeError(reason=f"`{name}` must be a [m] batch, got {list(values.shape)}")


def _check_pair(real: Tensor, fake: Tensor) -> None:
    _check_batch("real", real)
    _check_batch("fake", fake)
    if real.shape != fake.shape:
        raise ShapeError(reason=f"batch sizes differ: {real.shape[0]} real and {fake.shape[0]} fake")


def generator_loss(d_on_fake: Tensor) -> Tensor:
    """Non-saturating generator loss -(1/m) sum log D(G(z_i))."""
    _check_batch("d_on_fake", d_on_fake)
    return -clamped_log(d_on_fake).mean()


def discriminator_loss(d_on_real: Tensor, d_on_fake: Tensor) -> Tensor:
    """-(1/m) sum log D(x_i) - (1/m) sum log(1 - D(G(z_i)))."""
    _check_pair(d_on_real, d_on_fake)
    return -clamped_log(d_on_real).mean() - clamped_log(1.0 - d_on_fake).mean()


def wgan_losses(critic_on_real: Tensor, critic_on_fake: Tensor) -> Tuple[Tensor, Tensor]:
    """
    Returns (critic objective, generator loss).

    The critic maximizes mean(T(x)) - mean(T(G(z))), so its update minimizes
    the negated objective; the generator minimizes -mean(T(G(z))).
    """
    _check_pair(critic_on_real, critic_on_fake)
    return critic_on_real.mean() - critic_on_fake.mean(), wgan_generator_loss(critic_on_fake)


def wgan_generator_loss(critic_on_fake: Tensor) -> Tensor:
    _check_batch("critic_on_fake", critic_on_fake)
    return -critic_on_fake.mean()


def mean_absolute_error(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeError(reason=f"cannot compare {list(a.shape)} with {list(b.shape)}")
    return elementwise("abs", a - b).mean()


__all__ = [
    "generator_loss",
    "discriminator_loss",
    "wgan_losses",
    "wgan_generator_loss",
    "mean_absolute_error",
]
