import pytest

from kgan.data import MANIFEST_NAME, DatasetSplit, ImageGray, ImagePair, load_dataset, make_split, save_dataset
from kgan.data.pgm import encode_pgm
from kgan.errors import DatasetError


def test_make_split_sizes() -> None:
    split = make_split(12, 8, master_seed=1)

    assert len(split) == 12
    assert len(split.train) == 8
    assert len(split.test) == 4
    assert [pair.pair_id for pair in split.pairs()] == list(range(12))


def test_make_split_is_deterministic() -> None:
    first, second = make_split(6, 8, 3), make_split(6, 8, 3)

    assert [pair.pair_id for pair in first.train] == [pair.pair_id for pair in second.train]
    assert all(a.modality_a == b.modality_a for a, b in zip(first.pairs(), second.pairs()))


def test_split_sides_are_disjoint_and_sorted() -> None:
    split = make_split(9, 8, 0)
    train_ids = [pair.pair_id for pair in split.train]
    test_ids = [pair.pair_id for pair in split.test]

    assert not set(train_ids) & set(test_ids)
    assert train_ids == sorted(train_ids)
    assert test_ids == sorted(test_ids)


@pytest.mark.parametrize(
    "n_pairs, train_fraction",
    [
        [2, 0.5],
        [3, 0.0],
        [3, 1.0],
        [3, 0.1],
    ],
)
def test_fail_make_split(n_pairs: int, train_fraction: float) -> None:
    with pytest.raises(DatasetError):
        make_split(n_pairs, 8, 0, train_fraction)


def test_fail_split_with_overlap() -> None:
    pair = ImagePair(ImageGray([[0.0]]), ImageGray([[0.0]]), 1, 0)

    with pytest.raises(DatasetError):
        DatasetSplit([pair], [pair])


def test_save_and_load_dataset(tmp_path) -> None:
    split = make_split(6, 8, 2)

    manifest = save_dataset(split, tmp_path)
    loaded = load_dataset(tmp_path)

    assert manifest == tmp_path / MANIFEST_NAME
    assert manifest.read_text().splitlines()[0] == "pair_id,seed,split,path_a,path_b"
    assert [pair.pair_id for pair in loaded.train] == [pair.pair_id for pair in split.train]
    assert [pair.seed for pair in loaded.test] == [pair.seed for pair in split.test]
    for original, restored in zip(split.pairs(), loaded.pairs()):
        assert encode_pgm(restored.modality_a) == encode_pgm(original.modality_a)
        assert encode_pgm(restored.modality_b) == encode_pgm(original.modality_b)


def test_fail_load_dataset_without_manifest(tmp_path) -> None:
    with pytest.raises(DatasetError) as error:
        load_dataset(tmp_path)

    assert MANIFEST_NAME in str(error.value)


def test_fail_load_dataset_with_bad_columns(tmp_path) -> None:
    (tmp_path / MANIFEST_NAME).write_text("id,path\n")

    with pytest.raises(DatasetError):
        load_dataset(tmp_path)
