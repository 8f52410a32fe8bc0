from typing import Callable, Optional

import numpy as np

from kgan.errors import DomainError, NumericError
from kgan.prng import Xorshift64Star
from .graph import Graph, backward
from .tensor import Tensor, tensor_new

ScalarFunction = Callable[[Tensor], Tensor]


def grad_check(
    f: ScalarFunction, x: Tensor, h: float = 1e-5, components: Optional[int] = None, seed: int = 0
) -> float:
    """
    Returns max |analytic - central difference| / max(1, |central difference|).

    With `components` set, only that many coordinates (picked by a seeded
    generator) are finite-differenced, which keeps checks of whole networks
    affordable.
    """
    if h <= 0:
        raise DomainError(reason=f"step size must be positive, got {h}")

    with Graph() as graph:
        leaf = tensor_new(x.shape, x.data, track=True)
        analytic = backward(graph, f(leaf))[leaf].data.ravel()

    base = x.data.ravel()
    indices = list(range(base.size))
    if components is not None and components < base.size:
        indices = Xorshift64Star(seed).permutation(indices)[:components]

    worst = 0.0
    for index in indices:
        plus, minus = base.copy(), base.copy()
        plus[index] += h
        minus[index] -= h
        f_plus = f(Tensor(plus.reshape(x.shape))).item()
        f_minus = f(Tensor(minus.reshape(x.shape))).item()
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise NumericError(operation="grad_check")
        numeric = (f_plus - f_minus) / (2.0 * h)
        worst = max(worst, abs(analytic[index] - numeric) / max(1.0, abs(numeric)))

    return worst


__all__ = [
    "grad_check",
]
