from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from kgan.autodiff import Tensor, bias_add, elementwise, flatten, leaky_relu, matmul, reshape
from kgan.errors import LayerSpecError
from .functional import conv2d_forward, deconv2d_forward, softmax_t

PARAMETRIC_KINDS = {"conv2d", "deconv2d", "dense"}
ACTIVATION_KINDS = {"relu", "leaky_relu", "sigmoid", "tanh", "softmax_t"}
STRUCTURAL_KINDS = {"flatten", "reshape"}
LAYER_KINDS = PARAMETRIC_KINDS | ACTIVATION_KINDS | STRUCTURAL_KINDS

DEFAULT_LEAKY_SLOPE = 0.2

Shape = Tuple[int, ...]


@dataclass(frozen=True)
class LayerSpec:
    """
    One layer of a sequential network.

    `in_channels`/`out_channels` are feature counts for dense layers.
    Parametric layers own `<name>.weight` and `<name>.bias` in a ParameterSet.
    """

    kind: str
    name: str = ""
    in_channels: int = 0
    out_channels: int = 0
    kernel_size: int = 1
    stride: int = 1
    padding: int = 0
    slope: float = DEFAULT_LEAKY_SLOPE
    temperature: float = 1.0
    target_shape: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in LAYER_KINDS:
            raise LayerSpecError(layer=self.name or self.kind, reason=f"unknown kind `{self.kind}`")
        if self.kind in PARAMETRIC_KINDS:
            if not self.name:
                raise LayerSpecError(layer=self.kind, reason="parametric layers need a name")
            if self.in_channels < 1 or self.out_channels < 1:
                raise LayerSpecError(layer=self.name, reason="channel counts must be >= 1")
        if self.kernel_size < 1 or self.stride < 1:
            raise LayerSpecError(layer=self.name or self.kind, reason="kernel size and stride must be >= 1")
        if self.padding < 0:
            raise LayerSpecError(layer=self.name or self.kind, reason="padding must be >= 0")
        if self.kind == "leaky_relu" and self.slope < 0:
            raise LayerSpecError(layer=self.name or self.kind, reason="slope must be >= 0")
        if self.kind == "softmax_t" and self.temperature <= 0:
            raise LayerSpecError(layer=self.name or self.kind, reason="temperature must be > 0")
        if self.kind == "reshape" and (not self.target_shape or min(self.target_shape) < 1):
            raise LayerSpecError(layer=self.name or self.kind, reason="reshape needs a positive target shape")

    @property
    def parametric(self) -> bool:
        return self.kind in PARAMETRIC_KINDS

    @property
    def fan_in(self) -> int:
        if self.kind == "dense":
            return self.in_channels
        return self.in_channels * self.kernel_size * self.kernel_size

    def parameter_shapes(self) -> Dict[str, Shape]:
        if self.kind == "conv2d":
            weight = (self.out_channels, self.in_channels, self.kernel_size, self.kernel_size)
        elif self.kind == "deconv2d":
            weight = (self.in_channels, self.out_channels, self.kernel_size, self.kernel_size)
        elif self.kind == "dense":
            weight = (self.in_channels, self.out_channels)
        else:
            return {}
        return {f"{self.name}.weight": weight, f"{self.name}.bias": (self.out_channels,)}


def conv(
    name: str, in_channels: int, out_channels: int, kernel_size: int = 3, stride: int = 1, padding: int = 1
) -> LayerSpec:
    return LayerSpec("conv2d", name, in_channels, out_channels, kernel_size, stride, padding)


def deconv(
    name: str, in_channels: int, out_channels: int, kernel_size: int = 4, stride: int = 2, padding: int = 1
) -> LayerSpec:
    return LayerSpec("deconv2d", name, in_channels, out_channels, kernel_size, stride, padding)


def dense(name: str, in_features: int, out_features: int) -> LayerSpec:
    return LayerSpec("dense", name, in_features, out_features)


def activation(kind: str, slope: float = DEFAULT_LEAKY_SLOPE, temperature: float = 1.0) -> LayerSpec:
    return LayerSpec(kind, slope=slope, temperature=temperature)


def output_shape(specs: Sequence[LayerSpec], input_shape: Shape) -> Shape:
    """Walks the layer stack and returns the output shape for `input_shape` ([N, ...])."""
    shape = tuple(input_shape)
    for spec in specs:
        if spec.kind in ("conv2d", "deconv2d"):
            if len(shape) != 4 or shape[1] != spec.in_channels:
                raise LayerSpecError(
                    layer=spec.name, reason=f"expects {spec.in_channels} input channels, got {list(shape)}"
                )
            sizes = []
            for size in shape[2:]:
                if spec.kind == "conv2d":
                    padded = size + 2 * spec.padding
                    if padded < spec.kernel_size:
                        raise LayerSpecError(layer=spec.name, reason="kernel larger than padded input")
                    sizes.append((padded - spec.kernel_size) // spec.stride + 1)
                else:
                    sizes.append((size - 1) * spec.stride - 2 * spec.padding + spec.kernel_size)
            if min(sizes) < 1:
                raise LayerSpecError(layer=spec.name, reason="output size is not positive")
            shape = (shape[0], spec.out_channels, *sizes)
        elif spec.kind == "dense":
            if len(shape) != 2 or shape[1] != spec.in_channels:
                raise LayerSpecError(layer=spec.name, reason=f"expects {spec.in_channels} features, got {shape}")
            shape = (shape[0], spec.out_channels)
        elif spec.kind == "flatten":
            features = 1
            for size in shape[1:]:
                features *= size
            shape = (shape[0], features)
        elif spec.kind == "reshape":
            shape = (shape[0], *spec.target_shape)
    return shape


def apply_layer(spec: LayerSpec, x: Tensor, parameters: Optional[Dict[str, Tensor]] = None) -> Tensor:
    if spec.parametric:
        assert parameters is not None
        weight, bias = parameters[f"{spec.name}.weight"], parameters[f"{spec.name}.bias"]
        if spec.kind == "conv2d":
            return conv2d_forward(x, weight, bias, spec.stride, spec.padding)
        if spec.kind == "deconv2d":
            return deconv2d_forward(x, weight, bias, spec.stride, spec.padding)
        return bias_add(matmul(x, weight), bias)

    if spec.kind in ("relu", "sigmoid", "tanh"):
        return elementwise(spec.kind, x)
    if spec.kind == "leaky_relu":
        return leaky_relu(x, spec.slope)
    if spec.kind == "softmax_t":
        return softmax_t(x, spec.temperature)
    if spec.kind == "flatten":
        return flatten(x)
    return reshape(x, (x.shape[0], *spec.target_shape))


def forward(specs: Sequence[LayerSpec], parameters: Dict[str, Tensor], x: Tensor) -> Tensor:
    for spec in specs:
        x = apply_layer(spec, x, parameters)
    return x


__all__ = [
    "LayerSpec",
    "LAYER_KINDS",
    "DEFAULT_LEAKY_SLOPE",
    "conv",
    "deconv",
    "dense",
    "activation",
    "output_shape",
    "apply_layer",
    "forward",
]
