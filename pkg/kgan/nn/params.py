"""
Named parameter tensors and their binary file format.

File layout (all integers unsigned 32-bit little-endian):

    b"KGANP1" | count | count x (name length | utf-8 name | rank | rank x dim | float64 LE data)

Records keep the order of the layer specs, so serialization is bit-exact.
"""
import math
import struct
from collections.abc import Mapping
from pathlib import Path
from typing import Callable, Dict, Iterator, Sequence, Tuple, Union

import numpy as np

from kgan.autodiff import Tensor, tensor_new
from kgan.errors import CheckpointError, ShapeError
from kgan.prng import Xorshift64Star
from .layers import LayerSpec

MAGIC = b"KGANP1"
_U32 = struct.Struct("<I")
_FLOAT = np.dtype("<f8")


class ParameterSet(Mapping):
    def __init__(self, tensors: Dict[str, Tensor], init_seed: int = 0):
        self._tensors = dict(tensors)
        self.init_seed = init_seed

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._tensors)

    def __len__(self) -> int:
        return len(self._tensors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParameterSet):
            return NotImplemented
        return self.to_bytes() == other.to_bytes()

    def __repr__(self) -> str:
        return f"ParameterSet(tensors={len(self)}, count={self.count()}, init_seed={self.init_seed})"

    def count(self) -> int:
        return sum(tensor.size for tensor in self._tensors.values())

    def track(self) -> "ParameterSet":
        """Registers every tensor as a leaf of the active graph."""
        return self.map(lambda name, tensor: tensor_new(tensor.shape, tensor.data, track=True))

    def detach(self) -> "ParameterSet":
        return self.map(lambda name, tensor: tensor.detach())

    def map(self, function: Callable[[str, Tensor], Tensor]) -> "ParameterSet":
        return ParameterSet({name: function(name, tensor) for name, tensor in self._tensors.items()}, self.init_seed)

    def clip(self, bound: float) -> "ParameterSet":
        return self.map(lambda name, tensor: Tensor(np.clip(tensor.data, -bound, bound)))

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(tensor.data))) for tensor in self._tensors.values()), default=0.0)

    def check_specs(self, specs: Sequence[LayerSpec]) -> None:
        expected = _expected_shapes(specs)
        if list(expected) != list(self._tensors):
            raise ShapeError(reason=f"parameter names {list(self._tensors)} do not match layers {list(expected)}")
        for name, shape in expected.items():
            if self._tensors[name].shape != shape:
                raise ShapeError(reason=f"`{name}` has shape {list(self._tensors[name].shape)}, expected {list(shape)}")

    def to_bytes(self) -> bytes:
        chunks = [MAGIC, _U32.pack(len(self._tensors))]
        for name, tensor in self._tensors.items():
            encoded = name.encode("utf-8")
            chunks.append(_U32.pack(len(encoded)))
            chunks.append(encoded)
            chunks.append(_U32.pack(tensor.data.ndim))
            chunks.extend(_U32.pack(dimension) for dimension in tensor.shape)
            chunks.append(np.ascontiguousarray(tensor.data, dtype=_FLOAT).tobytes())
        return b"".join(chunks)

    @classmethod
    def from_bytes(cls, data: bytes, init_seed: int = 0, source: str = "<bytes>") -> "ParameterSet":
        reader = _Reader(data, source)
        if reader.take(len(MAGIC)) != MAGIC:
            raise CheckpointError(path=source, reason="bad magic, not a kgan parameter file")

        tensors: Dict[str, Tensor] = {}
        for _ in range(reader.u32()):
            name = reader.take(reader.u32()).decode("utf-8")
            shape = tuple(reader.u32() for _ in range(reader.u32()))
            count = math.prod(shape)
            values = np.frombuffer(reader.take(count * _FLOAT.itemsize), dtype=_FLOAT)
            tensors[name] = Tensor(values.astype(np.float64).reshape(shape))

        if reader.offset != len(data):
            raise CheckpointError(path=source, reason=f"{len(data) - reader.offset} trailing bytes")
        return cls(tensors, init_seed)

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: Union[str, Path], init_seed: int = 0) -> "ParameterSet":
        try:
            data = Path(path).read_bytes()
        except OSError as error:
            raise CheckpointError(path=str(path), reason=error.strerror or "unreadable") from error
        return cls.from_bytes(data, init_seed, str(path))


class _Reader:
    def __init__(self, data: bytes, source: str):
        self.data = data
        self.source = source
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.data):
            raise CheckpointError(path=self.source, reason=f"truncated record at byte {self.offset}")
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def u32(self) -> int:
        return _U32.unpack(self.take(_U32.size))[0]


def _expected_shapes(specs: Sequence[LayerSpec]) -> Dict[str, Tuple[int, ...]]:
    shapes: Dict[str, Tuple[int, ...]] = {}
    for spec in specs:
        shapes.update(spec.parameter_shapes())
    return shapes


def init_params(specs: Sequence[LayerSpec], seed: int) -> ParameterSet:
    """
    He-style uniform initialization: weights ~ U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), biases 0.

    Draws come from one `Xorshift64Star(seed)` stream consumed in layer order.
    """
    rng = Xorshift64Star(seed)
    tensors: Dict[str, Tensor] = {}
    for spec in specs:
        if not spec.parametric:
            continue
        bound = math.sqrt(6.0 / spec.fan_in)
        for name, shape in spec.parameter_shapes().items():
            if name.endswith(".bias"):
                tensors[name] = Tensor(np.zeros(shape))
            else:
                tensors[name] = Tensor(rng.uniform_array(math.prod(shape), -bound, bound).reshape(shape))
    return ParameterSet(tensors, seed)


__all__ = [
    "MAGIC",
    "ParameterSet",
    "init_params",
]
