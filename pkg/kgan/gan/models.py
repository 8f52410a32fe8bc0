import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from kgan.autodiff import Tensor, concat, elementwise, matmul, reshape
from kgan.errors import ModelError
from kgan.nn import LayerSpec, ParameterSet, activation, conv, dense, forward, init_params, output_shape
from kgan.prng import Xorshift64Star, derive_seed
from .optim import OptimizerState

SUPPORTED_SIZES = (8, 16, 32, 64, 128, 256)
MODES = ("standard", "wasserstein")
CONDITIONINGS = ("image", "noise")
DEFAULT_LATENT_DIM = 16

GENERATOR_CHANNELS = (32, 64, 64, 32)
DISCRIMINATOR_CHANNELS = (32, 64, 64)
# noise-conditioned models: dense generator, narrow discriminator
NOISE_GENERATOR_HIDDEN = (128, 128)
NOISE_DISCRIMINATOR_CHANNELS = (4, 8, 8)

# logits [fake, real] -> z_real - z_fake
_MARGIN = np.array([[-1.0], [1.0]])


def scaled_channels(channels: Sequence[int], scale: float) -> Tuple[int, ...]:
    return tuple(max(1, math.ceil(count * scale)) for count in channels)


def generator_specs(
    image_size: int, scale: float = 1.0, conditioning: str = "image", latent_dim: int = DEFAULT_LATENT_DIM
) -> Tuple[LayerSpec, ...]:
    if conditioning == "noise":
        first, second = scaled_channels(NOISE_GENERATOR_HIDDEN, scale)
        return (
            dense("g_dense1", latent_dim, first),
            activation("relu"),
            dense("g_dense2", first, second),
            activation("relu"),
            dense("g_output", second, image_size * image_size),
            activation("sigmoid"),
            LayerSpec("reshape", target_shape=(1, image_size, image_size)),
        )

    specs = []
    previous = 1
    for index, channels in enumerate(scaled_channels(GENERATOR_CHANNELS, scale), start=1):
        specs += [conv(f"g_conv{index}", previous, channels), activation("relu")]
        previous = channels
    specs += [conv("g_output", previous, 1), activation("sigmoid")]
    return tuple(specs)


def discriminator_specs(image_size: int, scale: float = 1.0, conditioning: str = "image") -> Tuple[LayerSpec, ...]:
    specs = []
    previous = 2 if conditioning == "image" else 1
    widths = DISCRIMINATOR_CHANNELS if conditioning == "image" else NOISE_DISCRIMINATOR_CHANNELS
    size = image_size
    for index, channels in enumerate(scaled_channels(widths, scale), start=1):
        specs += [conv(f"d_conv{index}", previous, channels, stride=2), activation("leaky_relu")]
        previous = channels
        size = (size - 1) // 2 + 1
    specs += [LayerSpec("flatten"), dense("d_logits", previous * size * size, 2)]
    return tuple(specs)


@dataclass
class GanModel:
    """
    Generator and discriminator of one GAN.

    The discriminator always ends in two logits ordered [fake, real]. In
    standard mode D(x) = sigmoid(z_real - z_fake), the probability of the real
    class at temperature 1; in wasserstein mode the critic score is the raw
    margin z_real - z_fake. Image-conditioned discriminators receive the source
    image and the candidate stacked as two channels.
    """

    generator_spec: Tuple[LayerSpec, ...]
    generator_params: ParameterSet
    discriminator_spec: Tuple[LayerSpec, ...]
    discriminator_params: ParameterSet
    image_size: int
    mode: str = "standard"
    conditioning: str = "image"
    scale: float = 1.0
    seed: int = 0
    latent_dim: int = DEFAULT_LATENT_DIM
    generator_state: Optional[OptimizerState] = None
    discriminator_state: Optional[OptimizerState] = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ModelError(reason=f"mode must be one of {list(MODES)}, got `{self.mode}`")
        if self.conditioning not in CONDITIONINGS:
            raise ModelError(reason=f"conditioning must be one of {list(CONDITIONINGS)}, got `{self.conditioning}`")
        self.generator_params.check_specs(self.generator_spec)
        self.discriminator_params.check_specs(self.discriminator_spec)

        image_shape = (1, 1, self.image_size, self.image_size)
        if output_shape(self.generator_spec, self.generator_input_shape(1)) != image_shape:
            raise ModelError(reason=f"generator output does not match {self.image_size}x{self.image_size} images")
        channels = 2 if self.conditioning == "image" else 1
        if output_shape(self.discriminator_spec, (1, channels, self.image_size, self.image_size)) != (1, 2):
            raise ModelError(reason="discriminator must end in two logits")

    def generator_input_shape(self, batch: int) -> Tuple[int, ...]:
        if self.conditioning == "noise":
            return batch, self.latent_dim
        return batch, 1, self.image_size, self.image_size

    def parameter_count(self) -> int:
        return self.generator_params.count() + self.discriminator_params.count()

    def copy(self) -> "GanModel":
        return replace(
            self,
            generator_state=self.generator_state.copy() if self.generator_state else None,
            discriminator_state=self.discriminator_state.copy() if self.discriminator_state else None,
        )

    def generate(self, inputs: Tensor, params: Optional[ParameterSet] = None) -> Tensor:
        return forward(self.generator_spec, self.generator_params if params is None else params, inputs)

    def logits(
        self, candidate: Tensor, source: Optional[Tensor] = None, params: Optional[ParameterSet] = None
    ) -> Tensor:
        if self.conditioning == "image":
            if source is None:
                raise ModelError(reason="image-conditioned discriminators need the source image")
            candidate = concat([source, candidate], axis=1)
        return forward(self.discriminator_spec, self.discriminator_params if params is None else params, candidate)

    def discriminate(
        self, candidate: Tensor, source: Optional[Tensor] = None, params: Optional[ParameterSet] = None
    ) -> Tensor:
        """D(x) in (0, 1) in standard mode, the unbounded critic score in wasserstein mode, shape [m]."""
        return score(self.logits(candidate, source, params), self.mode)

    def sample_noise(self, batch: int, rng: Xorshift64Star) -> Tensor:
        return Tensor(rng.normal_array(batch * self.latent_dim).reshape(batch, self.latent_dim))


def real_margin(logits: Tensor) -> Tensor:
    """z_real - z_fake for [m, 2] logits, shape [m]."""
    margin = matmul(logits, Tensor(_MARGIN))
    return reshape(margin, (logits.shape[0],))


def score(logits: Tensor, mode: str) -> Tensor:
    margin = real_margin(logits)
    if mode == "wasserstein":
        return margin
    return elementwise("sigmoid", margin)


def _check_size(image_size: int) -> None:
    if image_size not in SUPPORTED_SIZES:
        raise ModelError(reason=f"image size must be one of {list(SUPPORTED_SIZES)}, got {image_size}")


def build_model(
    image_size: int,
    seed: int,
    scale: float = 1.0,
    mode: str = "standard",
    conditioning: str = "image",
    latent_dim: int = DEFAULT_LATENT_DIM,
) -> GanModel:
    _check_size(image_size)
    if not 0.0 < scale <= 1.0:
        raise ModelError(reason=f"scale must be in (0, 1], got {scale}")
    if latent_dim < 1:
        raise ModelError(reason=f"latent dimension must be >= 1, got {latent_dim}")

    g_spec = generator_specs(image_size, scale, conditioning, latent_dim)
    d_spec = discriminator_specs(image_size, scale, conditioning)
    return GanModel(
        generator_spec=g_spec,
        generator_params=init_params(g_spec, derive_seed(seed, 0)),
        discriminator_spec=d_spec,
        discriminator_params=init_params(d_spec, derive_seed(seed, 1)),
        image_size=image_size,
        mode=mode,
        conditioning=conditioning,
        scale=scale,
        seed=seed,
        latent_dim=latent_dim,
    )


def build_teacher(
    image_size: int, seed: int, mode: str = "standard", conditioning: str = "image", **kwargs
) -> GanModel:
    return build_model(image_size, seed, 1.0, mode, conditioning, **kwargs)


def build_student(
    image_size: int, seed: int, scale: float = 0.5, mode: str = "standard", conditioning: str = "image", **kwargs
) -> GanModel:
    return build_model(image_size, seed, scale, mode, conditioning, **kwargs)


def synthesize(model: GanModel, sources: np.ndarray, batch_size: int = 16) -> np.ndarray:
    """
    Runs the generator without tracking over [n, H, W] source images.

    Returns [n, H, W] synthesized images in (0, 1).
    """
    if model.conditioning != "image":
        raise ModelError(reason="only image-conditioned models synthesize from source images")
    sources = np.asarray(sources, dtype=np.float64)
    if sources.ndim != 3 or sources.shape[1:] != (model.image_size, model.image_size):
        raise ModelError(
            reason=f"sources of shape {list(sources.shape)} do not fit a {model.image_size}x{model.image_size} model"
        )
    outputs = []
    for start in range(0, sources.shape[0], batch_size):
        chunk = sources[start : start + batch_size, None, :, :]
        outputs.append(model.generate(Tensor(chunk)).data[:, 0])
    return np.concatenate(outputs)


__all__ = [
    "SUPPORTED_SIZES",
    "MODES",
    "CONDITIONINGS",
    "DEFAULT_LATENT_DIM",
    "GanModel",
    "build_model",
    "build_teacher",
    "build_student",
    "generator_specs",
    "discriminator_specs",
    "scaled_channels",
    "real_margin",
    "score",
    "synthesize",
]
