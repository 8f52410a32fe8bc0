"""
Deterministic pseudo random numbers.

Every stochastic step of the package (parameter initialization, phantom
geometry, noise inputs, batch shuffles, flips) draws from `Xorshift64Star`:

    state ^= state >> 12
    state ^= state << 25   (mod 2**64)
    state ^= state >> 27
    output = state * 0x2545F4914F6CDD1D   (mod 2**64)

The 64-bit state is initialized with `splitmix64(seed)` (a zero result is
replaced by the splitmix increment, xorshift state must be non-zero).
Uniform doubles use the top 53 bits of the output, normal samples use the
Box-Muller transform over two uniforms.
"""
import math
from typing import List, MutableSequence, Sequence, TypeVar

import numpy as np

MASK_64 = 0xFFFFFFFFFFFFFFFF
SPLITMIX_INCREMENT = 0x9E3779B97F4A7C15
XORSHIFT_MULTIPLIER = 0x2545F4914F6CDD1D
DOUBLE_UNIT = 1.0 / (1 << 53)

T = TypeVar("T")


def splitmix64(value: int) -> int:
    z = (value + SPLITMIX_INCREMENT) & MASK_64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK_64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK_64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *path: int) -> int:
    """Hashes `master_seed` together with an index path into a 64-bit seed."""
    seed = splitmix64(master_seed & MASK_64)
    for item in path:
        seed = splitmix64(seed ^ splitmix64(item & MASK_64))
    return seed


class Xorshift64Star:
    def __init__(self, seed: int):
        self.seed = seed
        state = splitmix64(seed & MASK_64)
        self.state = state if state else SPLITMIX_INCREMENT

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK_64
        x ^= x >> 27
        self.state = x
        return (x * XORSHIFT_MULTIPLIER) & MASK_64

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        return low + (high - low) * ((self.next_u64() >> 11) * DOUBLE_UNIT)

    def uniform_array(self, count: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        draws = np.fromiter(((self.next_u64() >> 11) for _ in range(count)), dtype=np.float64, count=count)
        return low + (high - low) * (draws * DOUBLE_UNIT)

    def normal_array(self, count: int) -> np.ndarray:
        pairs = (count + 1) // 2
        u1 = self.uniform_array(pairs)
        u2 = self.uniform_array(pairs)
        # 1 - u keeps the logarithm argument in (0, 1]
        radius = np.sqrt(-2.0 * np.log(1.0 - u1))
        angle = 2.0 * math.pi * u2
        return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]

    def randint(self, low: int, high: int) -> int:
        """Returns an integer from the closed range [low, high]."""
        span = high - low + 1
        return low + int(self.uniform() * span) % span

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = int(self.uniform() * (i + 1))
            items[i], items[j] = items[j], items[i]

    def permutation(self, items: Sequence[T]) -> List[T]:
        result = list(items)
        self.shuffle(result)
        return result


__all__ = [
    "Xorshift64Star",
    "splitmix64",
    "derive_seed",
]
