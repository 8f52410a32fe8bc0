import math

import numpy as np
import pytest

from kgan.autodiff import Graph, Tensor
from kgan.errors import CheckpointError, ShapeError
from kgan.nn import ParameterSet, activation, conv, dense, init_params

SPECS = [conv("c1", 1, 4), activation("relu"), dense("fc", 4, 2)]


def test_init_params_is_deterministic() -> None:
    assert init_params(SPECS, seed=3) == init_params(SPECS, seed=3)
    assert init_params(SPECS, seed=3) != init_params(SPECS, seed=4)


def test_init_params_layout() -> None:
    params = init_params(SPECS, seed=0)

    assert list(params) == ["c1.weight", "c1.bias", "fc.weight", "fc.bias"]
    assert params.count() == 4 * 9 + 4 + 4 * 2 + 2
    assert params.init_seed == 0


def test_init_params_bounds() -> None:
    params = init_params(SPECS, seed=0)

    assert np.all(np.abs(params["c1.weight"].data) <= math.sqrt(6.0 / 9))
    assert np.all(np.abs(params["fc.weight"].data) <= math.sqrt(6.0 / 4))
    assert params["c1.bias"].tolist() == [0.0, 0.0, 0.0, 0.0]


def test_check_specs() -> None:
    params = init_params(SPECS, seed=0)
    params.check_specs(SPECS)

    with pytest.raises(ShapeError):
        params.check_specs([conv("c1", 1, 8), dense("fc", 4, 2)])
    with pytest.raises(ShapeError):
        params.check_specs([conv("other", 1, 4), dense("fc", 4, 2)])


def test_bytes_round_trip_is_bit_exact() -> None:
    params = init_params(SPECS, seed=9)

    restored = ParameterSet.from_bytes(params.to_bytes(), params.init_seed)

    assert restored == params
    assert restored.to_bytes() == params.to_bytes()


def test_save_and_load(tmp_path) -> None:
    params = init_params(SPECS, seed=2)
    path = tmp_path / "params.bin"

    params.save(path)

    assert ParameterSet.load(path, 2) == params


@pytest.mark.parametrize(
    "data",
    [
        b"NOTKGAN",
        init_params(SPECS, seed=0).to_bytes()[:-3],
        init_params(SPECS, seed=0).to_bytes() + b"\x00",
    ],
)
def test_fail_from_malformed_bytes(data: bytes) -> None:
    with pytest.raises(CheckpointError):
        ParameterSet.from_bytes(data)


def test_fail_load_missing_file(tmp_path) -> None:
    with pytest.raises(CheckpointError):
        ParameterSet.load(tmp_path / "missing.bin")


def test_clip_bounds_every_value() -> None:
    params = ParameterSet({"w": Tensor(np.array([-1.0, 0.005, 2.0]))})

    clipped = params.clip(0.01)

    assert clipped["w"].tolist() == [-0.01, 0.005, 0.01]
    assert clipped.max_abs() == 0.01
    assert params["w"].tolist() == [-1.0, 0.005, 2.0]


def test_track_registers_leaves() -> None:
    params = init_params(SPECS, seed=0)

    with Graph() as graph:
        tracked = params.track()

    assert all(tensor.tracked for tensor in tracked.values())
    assert len(graph.leaves()) == 4
    assert not any(tensor.tracked for tensor in tracked.detach().values())
